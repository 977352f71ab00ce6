//! Witness hypergraphs for the non-convergence arguments, each checked against
//! the density identities it is supposed to satisfy before being returned.
//!
//! Labels follow one convention throughout: distinguished vertices first
//! (endpoints `a = 1`, `b = 2`, or the hub), then path internals path by path.

use num_traits::ToPrimitive;

use crate::extlab::{classify_pair_with_cap, is_pair_strictly_balanced, PairClass};
use crate::folang::check_cycle_params;
use crate::hypercore::{
    best_subset, density, strictly_balanced_with_cap, Hypergraph, Indexed, RootedPair, Vertex, VertexWalk,
    DEFAULT_ENUMERATION_CAP,
};
use crate::rational::{rat, Rational};
use crate::{Error, Result};

fn check_arity(s: usize) -> Result<()> {
    if s < 3 {
        return Err(Error::Parameter(format!("arity must be at least 3, got {s}")));
    }
    Ok(())
}

/// A loose path of `t` edges from `a` to `b`; internal vertices are numbered
/// from `first` upwards in path order. Returns the graph and the full vertex
/// sequence `a, …, b`.
pub fn loose_path_between(
    s: usize,
    t: usize,
    a: Vertex,
    b: Vertex,
    first: Vertex,
) -> Result<(Hypergraph, Vec<Vertex>)> {
    check_arity(s)?;
    if t == 0 {
        return Err(Error::Parameter("a loose path needs at least one edge".into()));
    }
    let inner = (t * (s - 1) - 1) as Vertex;
    if a == b || (first..first + inner).contains(&a) || (first..first + inner).contains(&b) {
        return Err(Error::Parameter("path labels collide".into()));
    }
    let mut seq = vec![a];
    seq.extend(first..first + inner);
    seq.push(b);
    let mut g = Hypergraph::with_vertices(s, seq.iter().copied())?;
    for i in 0..t {
        g.add_edge(&seq[i * (s - 1)..=(i + 1) * (s - 1)])?;
    }
    Ok((g, seq))
}

/// Loose path with endpoints `1` and `2` and internals `3, 4, …`.
pub fn loose_path(s: usize, t: usize) -> Result<Hypergraph> {
    Ok(loose_path_between(s, t, 1, 2, 3)?.0)
}

fn verify(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what()))
    }
}

/// The pair `(G, H)` behind the lower bound on the largest limit point.
#[derive(Debug, Clone)]
pub struct DoublePathPair {
    pub pair: RootedPair,
    pub alpha: Rational,
    pub a: Vertex,
    pub b: Vertex,
    /// Middle vertices `x_1, …, x_{2m}` of the `a`–`b` paths.
    pub middles: Vec<Vertex>,
    pub z: Vertex,
    /// Whether the exhaustive balance and neutrality checks ran; they are
    /// skipped when either graph exceeds the enumeration cap.
    pub balance_checked: bool,
}

/// `α = s − 1 − 1/2^l + 1/(2^l·m)`.
pub fn double_path_alpha(s: usize, l: u32, m: usize) -> Rational {
    let p = 1i64 << l;
    rat(s as i64 - 1, 1) - rat(1, p) + rat(1, p * m as i64)
}

/// `H`: `2m` internally disjoint loose paths of length `2^l` between `a = 1`
/// and `b = 2`. `G`: `H` plus a vertex `z` and `m` loose paths of length `2^l`
/// from `z` to the middle vertices `x_1, …, x_m`.
///
/// Verified before returning: `ρ(H) = ρ(G, H) = 1/α`, and when the sizes
/// allow exhaustive search, `H` and `(G, H)` strictly balanced with `(G, H)`
/// neutral at `α`.
pub fn double_path_pair(s: usize, l: u32, m: usize) -> Result<DoublePathPair> {
    double_path_pair_with_cap(s, l, m, DEFAULT_ENUMERATION_CAP)
}

pub fn double_path_pair_with_cap(s: usize, l: u32, m: usize, cap: usize) -> Result<DoublePathPair> {
    check_arity(s)?;
    if l == 0 || l > 16 || m < 2 {
        return Err(Error::Parameter(format!("need l in 1..=16 and m >= 2, got l = {l}, m = {m}")));
    }
    let len = 1usize << l;
    let (a, b) = (1, 2);
    let mut next: Vertex = 3;
    let mut h = Hypergraph::with_vertices(s, [a, b])?;
    let mut middles = Vec::with_capacity(2 * m);
    for _ in 0..2 * m {
        let (p, seq) = loose_path_between(s, len, a, b, next)?;
        next += (len * (s - 1) - 1) as Vertex;
        middles.push(seq[(len / 2) * (s - 1)]);
        h = h.union(&p)?;
    }
    let z = next;
    next += 1;
    let mut g = h.clone();
    g.add_vertex(z);
    for &x in &middles[..m] {
        let (p, _) = loose_path_between(s, len, z, x, next)?;
        next += (len * (s - 1) - 1) as Vertex;
        g = g.union(&p)?;
    }
    let alpha = double_path_alpha(s, l, m);
    let pair = RootedPair::nested(g, h.clone())?;

    let target = alpha.recip();
    let rho_h = density(&h)?;
    verify(rho_h == target, || format!("ρ(H) = {rho_h}, expected {target}"))?;
    let rho_gh = pair.density()?;
    verify(rho_gh == target, || format!("ρ(G,H) = {rho_gh}, expected {target}"))?;
    let balance_checked = h.v() <= cap && pair.v_diff() <= cap;
    if balance_checked {
        verify(strictly_balanced_with_cap(&h, cap)?, || "H is not strictly balanced".into())?;
        verify(is_pair_strictly_balanced(&pair)?, || "(G,H) is not strictly balanced".into())?;
        let class = classify_pair_with_cap(&pair, &alpha, cap)?;
        verify(class == PairClass::Neutral, || format!("(G,H) is {} at α", class.name()))?;
    }
    Ok(DoublePathPair {
        pair,
        alpha,
        a,
        b,
        middles,
        z,
        balance_checked,
    })
}

/// The witness `H` (with its two cyclic parts) for the upper spectrum bound.
#[derive(Debug, Clone)]
pub struct CyclePairWitness {
    pub h: Hypergraph,
    /// Two edges sharing two vertices.
    pub h1: Hypergraph,
    /// Loose cycle of three edges.
    pub h2: Hypergraph,
    /// The vertex joining the parts (`x` in general, `x_1` when `k = s + 1`).
    pub hub: Vertex,
    pub a: usize,
    pub alpha: Rational,
}

/// `α = s − 1 − 1/(2^{k−s+1} + a)`.
pub fn cycle_pair_alpha(s: usize, k: usize, a: usize) -> Rational {
    let d = (1i64 << (k - s + 1)) + a as i64;
    rat(s as i64 - 1, 1) - rat(1, d)
}

/// Two edges sharing two vertices; `x_1` is `labels[0]`.
fn two_edges(s: usize, labels: &[Vertex]) -> Result<Hypergraph> {
    let mut g = Hypergraph::with_vertices(s, labels.iter().copied())?;
    g.add_edge(&labels[..s])?;
    let mut e2: Vec<Vertex> = labels[s - 1..2 * s - 2].to_vec();
    e2.push(labels[0]);
    g.add_edge(&e2)?;
    Ok(g)
}

/// Loose cycle of three edges; `x_1` is `labels[0]`.
fn three_cycle(s: usize, labels: &[Vertex]) -> Result<Hypergraph> {
    let mut g = Hypergraph::with_vertices(s, labels.iter().copied())?;
    g.add_edge(&labels[..s])?;
    g.add_edge(&labels[s - 1..2 * s - 1])?;
    let mut e3: Vec<Vertex> = labels[2 * s - 2..3 * s - 3].to_vec();
    e3.push(labels[0]);
    g.add_edge(&e3)?;
    Ok(g)
}

/// For `k ≥ s + 2`: disjoint `H_1`, `H_2`, a hub `x = 1`, and loose paths of
/// lengths `a_i + 2^{k−s} − 4` from `x` to the first vertex of each part.
/// For `k = s + 1`: `H_1` and `H_2` glued at `x_1 = 1` (then `a = 1` and the
/// split is ignored beyond the `(2, 2)` check).
///
/// Verified: `1/ρ(H) = α`, and for `k ≥ s + 2` also `e(H) = 2^{k−s+1} + a`
/// and `v(H) = e(H)(s − 1) − 1`.
pub fn cycle_pair_witness(s: usize, k: usize, a1: usize, a2: usize) -> Result<CyclePairWitness> {
    check_arity(s)?;
    let a = check_cycle_params(s, k, a1, a2)?;
    let alpha = cycle_pair_alpha(s, k, a);
    let hub: Vertex = 1;
    let (h1_labels, h2_labels): (Vec<Vertex>, Vec<Vertex>);
    let mut next: Vertex;
    if k == s + 1 {
        let n1 = 2 * (s - 1) - 1;
        let n2 = 3 * (s - 1) - 1;
        h1_labels = std::iter::once(hub).chain(2..2 + n1 as Vertex).collect();
        next = 2 + n1 as Vertex;
        h2_labels = std::iter::once(hub).chain(next..next + n2 as Vertex).collect();
    } else {
        h1_labels = (2..2 + 2 * (s as Vertex - 1)).collect();
        next = 2 + 2 * (s as Vertex - 1);
        h2_labels = (next..next + 3 * (s as Vertex - 1)).collect();
        next += 3 * (s as Vertex - 1);
    }
    let h1 = two_edges(s, &h1_labels)?;
    let h2 = three_cycle(s, &h2_labels)?;
    let mut h = h1.union(&h2)?;
    if k > s + 1 {
        h.add_vertex(hub);
        let base = 1usize << (k - s);
        for (ai, target) in [(a1, h1_labels[0]), (a2, h2_labels[0])] {
            let len = ai + base - 4;
            let (p, _) = loose_path_between(s, len, hub, target, next)?;
            next += (len * (s - 1) - 1) as Vertex;
            h = h.union(&p)?;
        }
        let e = (1usize << (k - s + 1)) + a;
        verify(h.e() == e, || format!("e(H) = {}, expected {e}", h.e()))?;
        verify(h.v() == e * (s - 1) - 1, || format!("v(H) = {}, expected {}", h.v(), e * (s - 1) - 1))?;
    }
    let inv = density(&h)?.recip();
    verify(inv == alpha, || format!("1/ρ(H) = {inv}, expected {alpha}"))?;
    // Relabel the second part so that it reads as the printed H_2 with x_1 first.
    let h1 = h1.compact();
    let h2 = h2.compact();
    Ok(CyclePairWitness {
        h,
        h1,
        h2,
        hub,
        a,
        alpha,
    })
}

/// No sub-hypergraph on at most `size_cap` vertices has density above `1/α`.
pub fn omega_tilde_check(g: &Hypergraph, alpha: &Rational, size_cap: usize) -> Result<bool> {
    let (p, q) = match (alpha.numer().to_i128(), alpha.denom().to_i128()) {
        (Some(p), Some(q)) if p > 0 => (p, q),
        _ => return Err(Error::Parameter(format!("alpha must be a positive rational, got {alpha}"))),
    };
    let n = g.v();
    if n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::capacity("vertex count", n, DEFAULT_ENUMERATION_CAP));
    }
    let ix = Indexed::new(g);
    let universe: Vec<usize> = (0..n).collect();
    // e/v > q/p  ⇔  p·e − q·v > 0
    let best = best_subset(
        n,
        |m| VertexWalk::new(&ix, &universe, &[], m),
        |w, _| (w.v >= 1 && w.v as usize <= size_cap).then(|| p * w.e as i128 - q * w.v as i128),
    );
    Ok(best.is_none_or(|(k, _)| k <= 0))
}
