use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Serialize, Serializer};
use statrs::distribution::{Discrete, Poisson};

use super::sampler::Sampler;
use crate::exec::{try_map_indexed, Execution};
use crate::extlab::{count_uncovered_copies_with_caps, is_pair_strictly_balanced, poisson_parameter_with_caps};
use crate::hypercore::{density, is_strictly_balanced, Hypergraph, RootedPair, SearchCaps};
use crate::rational::{format_rational, to_f64, Rational};
use crate::{Error, Result};

/// Counts at or above this value share one histogram bin when comparing with
/// a Poisson law.
pub const TAIL_POOL: u64 = 5;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

fn ser_alpha<S: Serializer>(a: &Option<Rational>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match a {
        Some(a) => ser.serialize_some(&format_rational(a)),
        None => ser.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub s: usize,
    pub n: usize,
    /// `p = n^{−α}` when set; otherwise `p` was given directly.
    #[serde(serialize_with = "ser_alpha")]
    pub alpha: Option<Rational>,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl ExperimentConfig {
    /// `p = exp(−α ln n)`, rounded once to the nearest `f64`.
    pub fn with_alpha(s: usize, n: usize, alpha: Rational, trials: u64, seed: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        let p = (-to_f64(&alpha) * (n as f64).ln()).exp().min(1.0);
        let cfg = ExperimentConfig { s, n, alpha: Some(alpha), p, trials, seed, exec: Execution::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_probability(s: usize, n: usize, p: f64, trials: u64, seed: u64) -> Result<Self> {
        let cfg = ExperimentConfig { s, n, alpha: None, p, trials, seed, exec: Execution::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Parameter(format!("p = {} is not a probability", self.p)));
        }
        if self.trials < 1 {
            return Err(Error::Parameter("at least one trial is required".into()));
        }
        Sampler::new(self.s, self.n).map(|_| ())
    }

    pub fn sampler(&self) -> Result<Sampler> {
        Sampler::new(self.s, self.n)
    }
}

/// One trial of `G^s(n, p)`; a pure function of `(cfg.seed, trial)`.
pub fn sample(cfg: &ExperimentConfig, trial: u64) -> Result<Hypergraph> {
    cfg.validate()?;
    Ok(cfg.sampler()?.sample(cfg.p, cfg.seed, trial))
}

/// One observed count vector and the number of trials that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub counts: Vec<u64>,
    pub trials: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub estimates: Vec<f64>,
    pub intervals: Vec<[f64; 2]>,
    pub histogram: Vec<HistogramRow>,
    /// Limit means the histogram is compared with.
    pub expected: Vec<f64>,
    pub tv_distance: Option<f64>,
    /// Pairwise Pearson correlations, pairs in lexicographic order; `None`
    /// where a count never varies.
    pub correlations: Vec<Option<f64>>,
    pub tail_pool: u64,
    pub wall_ms: u64,
}

impl ExperimentReport {
    fn new(config: &ExperimentConfig, start: Instant) -> Self {
        ExperimentReport {
            config: config.clone(),
            seed: config.seed,
            estimates: Vec::new(),
            intervals: Vec::new(),
            histogram: Vec::new(),
            expected: Vec::new(),
            tv_distance: None,
            correlations: Vec::new(),
            tail_pool: TAIL_POOL,
            wall_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let ph = successes as f64 / n;
    let z2 = z * z;
    let centre = (ph + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn run_trials<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Hypergraph) -> Result<T> + Sync + Send,
{
    cfg.validate()?;
    let smp = cfg.sampler()?;
    try_map_indexed(cfg.exec, cfg.trials, |t| {
        let g = smp.sample(cfg.p, cfg.seed, t);
        f(&g).map_err(|e| Error::Trial { trial: t, source: Box::new(e) })
    })
}

/// Fraction of trials whose sample satisfies `predicate`, with a Wilson 95%
/// interval. The histogram has one row per outcome (`0` false, `1` true).
pub fn estimate_probability<F>(cfg: &ExperimentConfig, predicate: F) -> Result<ExperimentReport>
where
    F: Fn(&Hypergraph) -> Result<bool> + Sync + Send,
{
    let start = Instant::now();
    let hits = run_trials(cfg, predicate)?;
    let yes = hits.iter().filter(|&&b| b).count() as u64;
    let mut r = ExperimentReport::new(cfg, start);
    r.estimates = vec![yes as f64 / cfg.trials as f64];
    let (lo, hi) = wilson_interval(yes, cfg.trials, Z95);
    r.intervals = vec![[lo, hi]];
    r.histogram = [(0, cfg.trials - yes), (1, yes)]
        .into_iter()
        .filter(|&(_, t)| t > 0)
        .map(|(c, t)| HistogramRow { counts: vec![c], trials: t })
        .collect();
    r.wall_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// `P(X = c)` for `X ~ Pois(λ)`, pooling `c ≥ TAIL_POOL`.
fn pooled_pmf(lambda: f64, c: u64) -> f64 {
    if lambda <= 0.0 {
        return if c == 0 { 1.0 } else { 0.0 };
    }
    let pois = Poisson::new(lambda).expect("positive rate");
    if c < TAIL_POOL {
        pois.pmf(c)
    } else {
        1.0 - (0..TAIL_POOL).map(|i| pois.pmf(i)).sum::<f64>()
    }
}

/// Total-variation distance between the empirical joint law of `samples`
/// (one count vector per trial) and the product of `Pois(λ_i)`, with each
/// coordinate pooled at `TAIL_POOL`.
pub fn tv_to_poisson_product(samples: &[Vec<u64>], lambdas: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mut emp: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    for c in samples {
        let key: Vec<u64> = c.iter().map(|&x| x.min(TAIL_POOL)).collect();
        *emp.entry(key).or_default() += 1.0 / n;
    }
    let dims = lambdas.len() as u32;
    let cells = (TAIL_POOL + 1).pow(dims);
    let mut total = 0.0;
    for idx in 0..cells {
        let mut key = Vec::with_capacity(dims as usize);
        let mut rest = idx;
        for _ in 0..dims {
            key.push(rest % (TAIL_POOL + 1));
            rest /= TAIL_POOL + 1;
        }
        let model: f64 = key.iter().zip(lambdas).map(|(&c, &l)| pooled_pmf(l, c)).product();
        total += (emp.get(&key).copied().unwrap_or(0.0) - model).abs();
    }
    total / 2.0
}

pub fn tv_to_poisson(samples: &[u64], lambda: f64) -> f64 {
    let rows: Vec<Vec<u64>> = samples.iter().map(|&c| vec![c]).collect();
    tv_to_poisson_product(&rows, &[lambda])
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

fn histogram(samples: &[Vec<u64>]) -> Vec<HistogramRow> {
    let mut h: BTreeMap<&Vec<u64>, u64> = BTreeMap::new();
    for c in samples {
        *h.entry(c).or_default() += 1;
    }
    h.into_iter().map(|(c, t)| HistogramRow { counts: c.clone(), trials: t }).collect()
}

fn fill_counts(r: &mut ExperimentReport, samples: &[Vec<u64>], lambdas: &[f64]) {
    let k = lambdas.len();
    let n = samples.len() as f64;
    let cols: Vec<Vec<f64>> = (0..k).map(|i| samples.iter().map(|c| c[i] as f64).collect()).collect();
    r.estimates = cols.iter().map(|c| c.iter().sum::<f64>() / n).collect();
    r.intervals = cols
        .iter()
        .map(|c| {
            let m = c.iter().sum::<f64>() / n;
            let var = c.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            let half = Z95 * (var / n).sqrt();
            [(m - half).max(0.0), m + half]
        })
        .collect();
    r.correlations = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).map(|(i, j)| pearson(&cols[i], &cols[j])).collect();
    r.histogram = histogram(samples);
    r.expected = lambdas.to_vec();
    r.tv_distance = Some(tv_to_poisson_product(samples, lambdas));
}

/// Joint copy counts of strictly balanced motifs of one common density `ρ`,
/// compared with independent `Pois(1/a_i)`, `a_i = |Aut(motif_i)|`.
pub fn poisson_fit(cfg: &ExperimentConfig, motifs: &[Hypergraph], caps: SearchCaps) -> Result<ExperimentReport> {
    let start = Instant::now();
    if motifs.is_empty() {
        return Err(Error::Parameter("at least one motif is required".into()));
    }
    let rho = density(&motifs[0])?;
    for (i, m) in motifs.iter().enumerate() {
        if m.arity() != cfg.s {
            return Err(Error::Arity { expected: cfg.s, found: m.arity() });
        }
        if !is_strictly_balanced(m)? {
            return Err(Error::Precondition(format!("motif {i} is not strictly balanced")));
        }
        let d = density(m)?;
        if d != rho {
            return Err(Error::Precondition(format!(
                "motif {i} has density {}, motif 0 has {}",
                format_rational(&d),
                format_rational(&rho)
            )));
        }
    }
    if let Some(a) = &cfg.alpha {
        if *a != rho.recip() {
            return Err(Error::Precondition(format!(
                "alpha {} differs from 1/ρ = {}",
                format_rational(a),
                format_rational(&rho.recip())
            )));
        }
    }
    let lambdas = motifs
        .iter()
        .map(|m| caps.automorphism_count(m).map(|a| 1.0 / a as f64))
        .collect::<Result<Vec<_>>>()?;
    let samples = run_trials(cfg, |g| motifs.iter().map(|m| caps.count_copies(m, g).map(|c| c as u64)).collect())?;
    let mut r = ExperimentReport::new(cfg, start);
    fill_counts(&mut r, &samples, &lambdas);
    r.wall_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// Checks the identities the uncovered-copy limit relies on: `H` strictly
/// balanced, `(G, H)` strictly balanced, `ρ(H) = ρ(G, H) = 1/α`.
pub fn check_uncovered_preconditions(pair: &RootedPair, alpha: &Rational) -> Result<()> {
    let h = pair.inner();
    if !is_strictly_balanced(h)? {
        return Err(Error::Precondition("H is not strictly balanced".into()));
    }
    let target = alpha.recip();
    let rho_h = density(h)?;
    if rho_h != target {
        return Err(Error::Precondition(format!(
            "ρ(H) = {} but 1/α = {}",
            format_rational(&rho_h),
            format_rational(&target)
        )));
    }
    if pair.v_diff() == 0 && pair.e_diff() == 0 {
        return Ok(());
    }
    if pair.v_diff() == 0 {
        return Err(Error::Precondition("v(G,H) = 0 with extra edges".into()));
    }
    if !is_pair_strictly_balanced(pair)? {
        return Err(Error::Precondition("(G,H) is not strictly balanced".into()));
    }
    let rho_gh = pair.density()?;
    if rho_gh != target {
        return Err(Error::Precondition(format!(
            "ρ(G,H) = {} but 1/α = {}",
            format_rational(&rho_gh),
            format_rational(&target)
        )));
    }
    Ok(())
}

/// Histogram of `Ñ` (copies of `H` lying in no copy of `G`) against
/// `Pois(λ)` with `λ = exp(−a(H)/(a_1a_2))/a(H)`.
pub fn uncovered_copies_experiment(
    pair: &RootedPair,
    cfg: &ExperimentConfig,
    caps: SearchCaps,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let alpha = cfg
        .alpha
        .as_ref()
        .ok_or_else(|| Error::Parameter("this experiment needs p = n^{-α} with α given".into()))?;
    if pair.outer().arity() != cfg.s {
        return Err(Error::Arity { expected: cfg.s, found: pair.outer().arity() });
    }
    check_uncovered_preconditions(pair, alpha)?;
    let lambda = poisson_parameter_with_caps(pair, caps)?.lambda();
    let (h, g) = (pair.inner(), pair.outer());
    let samples = run_trials(cfg, |host| Ok(vec![count_uncovered_copies_with_caps(h, g, host, caps)? as u64]))?;
    let mut r = ExperimentReport::new(cfg, start);
    fill_counts(&mut r, &samples, &[lambda]);
    r.wall_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeCell {
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    pub n: usize,
    pub p: f64,
    pub estimate: f64,
    pub interval: [f64; 2],
}

fn ser_rational<S: Serializer>(a: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(a))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub s: usize,
    pub trials: u64,
    pub seed: u64,
    pub cells: Vec<ProbeCell>,
    /// `α` values whose estimate stays inside `[0.2, 0.8]` for every `n`.
    pub flagged: Vec<String>,
    pub wall_ms: u64,
}

impl ProbeReport {
    /// One row per grid cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,n,p,estimate,lo,hi\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{:e},{},{},{}\n",
                format_rational(&c.alpha),
                c.n,
                c.p,
                c.estimate,
                c.interval[0],
                c.interval[1]
            ));
        }
        out
    }
}

/// Estimates `Pr[G^s(n, n^{−α}) ⊨ property]` over an `α × n` grid. Every cell
/// uses the same seed and trial indices, so columns are coupled across `α`.
pub fn spectrum_probe<F>(
    s: usize,
    alphas: &[Rational],
    ns: &[usize],
    trials: u64,
    seed: u64,
    exec: Execution,
    property: F,
) -> Result<ProbeReport>
where
    F: Fn(&Hypergraph) -> Result<bool> + Sync + Send,
{
    let start = Instant::now();
    let mut cells = Vec::new();
    let mut flagged = Vec::new();
    for a in alphas {
        let mut inside = !ns.is_empty();
        for &n in ns {
            let cfg = ExperimentConfig::with_alpha(s, n, a.clone(), trials, seed)?.execution(exec);
            let r = estimate_probability(&cfg, &property)?;
            let est = r.estimates[0];
            inside &= (0.2..=0.8).contains(&est);
            cells.push(ProbeCell { alpha: a.clone(), n, p: cfg.p, estimate: est, interval: r.intervals[0] });
        }
        if inside {
            flagged.push(format_rational(a));
        }
    }
    Ok(ProbeReport { s, trials, seed, cells, flagged, wall_ms: start.elapsed().as_millis() as u64 })
}
