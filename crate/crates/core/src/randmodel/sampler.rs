use crate::hypercore::{Hypergraph, Vertex};
use crate::{Error, Result};

/// Largest `C(n, s)` the sampler accepts.
pub const MAX_SUBSETS: u64 = 1 << 53;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream key for one trial: `mix(mix(seed ^ γ) ^ trial)` with `γ` the
/// golden-ratio constant. Stable across runs and platforms.
pub fn trial_key(seed: u64, trial: u64) -> u64 {
    mix(mix(seed ^ 0x9e37_79b9_7f4a_7c15) ^ trial)
}

/// A uniform in `(0, 1)` attached to the rank segment `[lo, hi)`.
fn node_uniform(key: u64, lo: u64, hi: u64, tag: u64) -> f64 {
    let h = mix(mix(key ^ lo.wrapping_mul(0xd6e8_feb8_6659_fd93)) ^ hi.rotate_left(29) ^ tag);
    ((h >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Minimum of `k` independent uniforms on `(0, 1)` by inversion.
fn min_of(k: u64, u: f64) -> f64 {
    -((-u).ln_1p() / k as f64).exp_m1()
}

/// `G^s(n, p)` over the colex ranking of `s`-subsets of `{1, …, n}`.
///
/// Every subset rank `r` carries a uniform `U_r` and is an edge iff `U_r < p`.
/// The uniforms are never drawn one by one: the minimum over a rank segment is
/// derived from the parent's minimum (given the minimum of `k` uniforms and
/// where it sits, the other `k − 1` are independent uniforms above it), so
/// segments whose minimum is at least `p` are skipped whole. Each segment's
/// randomness is a hash of `(seed, trial, segment)`, which makes the output
/// independent of `p` except through the threshold; that is the coupling.
#[derive(Debug, Clone)]
pub struct Sampler {
    s: usize,
    n: usize,
    total: u64,
}

impl Sampler {
    pub fn new(s: usize, n: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::Parameter(format!("arity must be at least 2, got {s}")));
        }
        if n < s {
            return Err(Error::Parameter(format!("n = {n} is smaller than the arity {s}")));
        }
        let total = choose(n as u64, s as u64).filter(|&t| t <= MAX_SUBSETS).ok_or_else(|| {
            Error::capacity("s-subsets", usize::MAX, MAX_SUBSETS as usize)
        })?;
        Ok(Sampler { s, n, total })
    }

    pub fn arity(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C(n, s)`.
    pub fn subsets(&self) -> u64 {
        self.total
    }

    /// Ranks with `U_r < p_max`, in increasing order, each with its uniform.
    pub fn ranks_below(&self, p_max: f64, seed: u64, trial: u64) -> Vec<(u64, f64)> {
        let key = trial_key(seed, trial);
        let mut out = Vec::new();
        let root = min_of(self.total, node_uniform(key, 0, self.total, 0));
        // Depth-first, right child pushed first so ranks come out sorted.
        let mut stack = vec![(0u64, self.total, root)];
        while let Some((lo, hi, m)) = stack.pop() {
            if m >= p_max {
                continue;
            }
            if hi - lo == 1 {
                out.push((lo, m));
                continue;
            }
            let mid = lo + (hi - lo) / 2;
            let (nl, nr) = (mid - lo, hi - mid);
            let min_left = node_uniform(key, lo, hi, 1) * ((hi - lo) as f64) < nl as f64;
            let other = m + (1.0 - m) * min_of(if min_left { nr } else { nl }, node_uniform(key, lo, hi, 2));
            let (ml, mr) = if min_left { (m, other) } else { (other, m) };
            stack.push((mid, hi, mr));
            stack.push((lo, mid, ml));
        }
        out
    }

    /// All `C(n, s)` uniforms in rank order: the naive sampler's view of the
    /// same randomness.
    pub fn all_uniforms(&self, seed: u64, trial: u64, cap: u64) -> Result<Vec<f64>> {
        if self.total > cap {
            return Err(Error::capacity("s-subsets", self.total as usize, cap as usize));
        }
        let v = self.ranks_below(f64::INFINITY, seed, trial);
        debug_assert_eq!(v.len() as u64, self.total);
        Ok(v.into_iter().map(|(_, u)| u).collect())
    }

    pub fn sample(&self, p: f64, seed: u64, trial: u64) -> Hypergraph {
        let ranks: Vec<u64> = self.ranks_below(p, seed, trial).into_iter().map(|(r, _)| r).collect();
        self.build(&ranks)
    }

    /// One Bernoulli comparison per subset; for cross-checking [`Sampler::sample`].
    pub fn sample_naive(&self, p: f64, seed: u64, trial: u64, cap: u64) -> Result<Hypergraph> {
        let us = self.all_uniforms(seed, trial, cap)?;
        let ranks: Vec<u64> = (0..self.total).filter(|&r| us[r as usize] < p).collect();
        Ok(self.build(&ranks))
    }

    /// Samples at several probabilities from one set of uniforms, so the edge
    /// sets are nested in the order of `ps`.
    pub fn sample_coupled(&self, ps: &[f64], seed: u64, trial: u64) -> Vec<Hypergraph> {
        let top = ps.iter().copied().fold(0.0, f64::max);
        let below = self.ranks_below(top, seed, trial);
        ps.iter()
            .map(|&p| {
                let ranks: Vec<u64> = below.iter().filter(|(_, u)| *u < p).map(|(r, _)| *r).collect();
                self.build(&ranks)
            })
            .collect()
    }

    pub fn build(&self, ranks: &[u64]) -> Hypergraph {
        let mut g = Hypergraph::with_vertices(self.s, 1..=self.n as Vertex).expect("arity checked");
        for &r in ranks {
            g.add_edge(&self.unrank(r)).expect("unranked subsets are valid edges");
        }
        g
    }

    /// Colex unranking: the subset `{c_1 < … < c_s}` of `{0, …, n−1}` has rank
    /// `Σ C(c_i, i)`; labels are shifted to start at 1.
    pub fn unrank(&self, mut r: u64) -> Vec<Vertex> {
        let mut out = vec![0; self.s];
        let mut upper = self.n as u64;
        for i in (1..=self.s as u64).rev() {
            // Largest c < upper with C(c, i) <= r.
            let (mut lo, mut hi) = (i - 1, upper - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if choose(mid, i).is_some_and(|v| v <= r) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            r -= choose(lo, i).unwrap();
            out[i as usize - 1] = lo as Vertex + 1;
            upper = lo;
        }
        out
    }

    pub fn rank(&self, edge: &[Vertex]) -> u64 {
        let mut e: Vec<u64> = edge.iter().map(|&v| v as u64 - 1).collect();
        e.sort_unstable();
        e.iter().enumerate().map(|(i, &c)| choose(c, i as u64 + 1).unwrap()).sum()
    }
}

/// `C(n, k)` if it fits in `u64`.
fn choose(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_round_trip() {
        let smp = Sampler::new(3, 9).unwrap();
        assert_eq!(smp.subsets(), 84);
        let mut seen = std::collections::BTreeSet::new();
        for r in 0..smp.subsets() {
            let e = smp.unrank(r);
            assert!(e.windows(2).all(|w| w[0] < w[1]) && e[2] <= 9 && e[0] >= 1);
            assert_eq!(smp.rank(&e), r);
            seen.insert(e);
        }
        assert_eq!(seen.len(), 84);
        assert_eq!(smp.unrank(0), vec![1, 2, 3]);
        assert_eq!(smp.unrank(1), vec![1, 2, 4]);
        assert_eq!(smp.unrank(2), vec![1, 3, 4]);
    }

    #[test]
    fn extremes() {
        let smp = Sampler::new(3, 8).unwrap();
        assert_eq!(smp.sample(0.0, 5, 0).e(), 0);
        assert_eq!(smp.sample(1.0, 5, 0).e(), 56);
        assert!(Sampler::new(3, 2).is_err());
    }

    #[test]
    fn pruned_equals_naive() {
        for (s, n) in [(3, 10), (3, 23), (4, 11)] {
            let smp = Sampler::new(s, n).unwrap();
            for trial in 0..20 {
                for p in [0.001, 0.05, 0.3, 0.9] {
                    assert_eq!(smp.sample(p, 77, trial), smp.sample_naive(p, 77, trial, 2000).unwrap());
                }
            }
        }
    }

    #[test]
    fn uniforms_look_uniform() {
        let smp = Sampler::new(3, 30).unwrap();
        let us = smp.all_uniforms(1, 0, 10_000).unwrap();
        let mean = us.iter().sum::<f64>() / us.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
        let mut bins = [0usize; 10];
        for u in &us {
            bins[(u * 10.0) as usize] += 1;
        }
        let expect = us.len() as f64 / 10.0;
        assert!(bins.iter().all(|&b| (b as f64 - expect).abs() < 5.0 * expect.sqrt()), "{bins:?}");
    }

    #[test]
    fn coupled_samples_nest() {
        let smp = Sampler::new(3, 15).unwrap();
        let gs = smp.sample_coupled(&[0.05, 0.1, 0.2], 3, 4);
        assert!(gs[0].is_subgraph_of(&gs[1]) && gs[1].is_subgraph_of(&gs[2]));
        assert_eq!(gs[1], smp.sample(0.1, 3, 4));
    }
}
