//! Seeded sampling of `G^s(n, p)` and the Monte Carlo experiments built on it.
//!
//! Trial `t` of an experiment with seed `σ` is a pure function of `(σ, t)`,
//! so trials run in any order (or in parallel) and reruns are exact.

mod experiment;
mod sampler;

pub use experiment::{
    check_uncovered_preconditions, estimate_probability, pearson, poisson_fit, sample, spectrum_probe,
    tv_to_poisson, tv_to_poisson_product, uncovered_copies_experiment, wilson_interval, ExperimentConfig,
    ExperimentReport, HistogramRow, ProbeCell, ProbeReport, TAIL_POOL, Z95,
};
pub use sampler::{trial_key, Sampler, MAX_SUBSETS};
