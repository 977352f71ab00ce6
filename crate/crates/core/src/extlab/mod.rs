//! The extension calculus: `f_α` and the safe/rigid/neutral classification,
//! strict extensions and `(K, T)`-maximality, the counters `Ñ` and `N^r`,
//! the Poisson parameter of uncovered copies, and cyclic `m`-extensions.

mod classify;
mod copies;
mod cyclic;
mod extension;

pub use classify::{classify_pair, classify_pair_with_cap, f_alpha, is_pair_strictly_balanced, PairClass};
pub use copies::{
    count_uncovered_copies, count_uncovered_copies_with_caps, poisson_parameter, poisson_parameter_with_caps,
    PoissonParameter,
};
pub use cyclic::{
    cyclic_density_bound, find_m_decomposition, in_cyclic_class, is_cyclically_m_maximal, match_cyclic_extension,
    CyclicPattern,
};
pub use extension::{
    count_maximal_extensions, is_extension, is_kr_maximal, is_kt_maximal, is_strict_extension, strict_extensions,
    DEFAULT_CANDIDATE_CAP,
};
