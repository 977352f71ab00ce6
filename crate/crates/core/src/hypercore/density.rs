use std::cmp::{Ordering, Reverse};

use num_bigint::BigInt;

use super::{Hypergraph, Indexed};
use crate::exec::{self, Execution};
use crate::rational::{cmp_frac, Rational};
use crate::{Error, Result};

/// Largest dimension walked by the subset enumerations (vertices or edges,
/// whichever is smaller).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// `e(G)/v(G)`.
pub fn density(g: &Hypergraph) -> Result<Rational> {
    if g.v() == 0 {
        return Err(Error::Domain("density of a hypergraph without vertices".into()));
    }
    Ok(Rational::new(BigInt::from(g.e()), BigInt::from(g.v())))
}

pub(crate) fn cmp_density(e1: u64, v1: u64, e2: u64, v2: u64) -> Ordering {
    cmp_frac(e1, v1, e2, v2)
}

/// `e/v` with ordering by value.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frac(pub u64, pub u64);

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Frac {}
impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_frac(self.0, self.1, other.0, other.1)
    }
}

/// State that tracks a quantity while single bits of a subset are flipped.
pub(crate) trait Walk: Send {
    fn toggle(&mut self, bit: usize);
}

/// Visits every subset of a `dim`-element universe in Gray-code order and
/// returns the subset with the largest key. `init(mask)` must build the state
/// for `mask`, the walk only ever flips the low bits. Keys should embed the
/// mask so the maximum is unique and independent of block scheduling.
pub(crate) fn best_subset<S, K, I, F>(dim: usize, init: I, key: F) -> Option<(K, u64)>
where
    S: Walk,
    K: Ord + Send,
    I: Fn(u64) -> S + Sync + Send,
    F: Fn(&S, u64) -> Option<K> + Sync + Send,
{
    assert!(dim < 64, "subset walk dimension {dim} too large");
    let high = if dim >= 14 { 6 } else { 0 };
    let low = dim - high;
    let blocks = exec::map_indexed(Execution::Parallel, 1u64 << high, |b| {
        let mut mask = b << low;
        let mut state = init(mask);
        let mut best = key(&state, mask).map(|k| (k, mask));
        for i in 1..(1u64 << low) {
            let bit = i.trailing_zeros() as usize;
            state.toggle(bit);
            mask ^= 1 << bit;
            if let Some(k) = key(&state, mask) {
                if best.as_ref().is_none_or(|(bk, _)| k > *bk) {
                    best = Some((k, mask));
                }
            }
        }
        best
    });
    blocks.into_iter().flatten().max_by(|a, b| a.0.cmp(&b.0))
}

/// Walks vertex subsets; `e` counts edges induced by the current set.
#[derive(Clone)]
pub(crate) struct VertexWalk<'a> {
    g: &'a Indexed,
    universe: &'a [usize],
    inside: Vec<bool>,
    missing: Vec<u32>,
    pub v: u64,
    pub e: u64,
}

impl<'a> VertexWalk<'a> {
    /// `fixed` vertices are always inside; bit `i` of `mask` selects `universe[i]`.
    pub fn new(g: &'a Indexed, universe: &'a [usize], fixed: &[usize], mask: u64) -> Self {
        let mut inside = vec![false; g.n()];
        for &x in fixed {
            inside[x] = true;
        }
        for (i, &x) in universe.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside[x] = true;
            }
        }
        let missing: Vec<u32> = g
            .edges
            .iter()
            .map(|e| e.iter().filter(|&&x| !inside[x as usize]).count() as u32)
            .collect();
        let v = inside.iter().filter(|&&b| b).count() as u64;
        let e = missing.iter().filter(|&&m| m == 0).count() as u64;
        VertexWalk {
            g,
            universe,
            inside,
            missing,
            v,
            e,
        }
    }
}

impl Walk for VertexWalk<'_> {
    fn toggle(&mut self, bit: usize) {
        let x = self.universe[bit];
        if self.inside[x] {
            for &j in &self.g.incidence[x] {
                let m = &mut self.missing[j as usize];
                if *m == 0 {
                    self.e -= 1;
                }
                *m += 1;
            }
            self.inside[x] = false;
            self.v -= 1;
        } else {
            for &j in &self.g.incidence[x] {
                let m = &mut self.missing[j as usize];
                *m -= 1;
                if *m == 0 {
                    self.e += 1;
                }
            }
            self.inside[x] = true;
            self.v += 1;
        }
    }
}

/// Walks edge subsets; `v` is the size of the union of the chosen edges.
pub(crate) struct EdgeWalk<'a> {
    g: &'a Indexed,
    chosen: Vec<bool>,
    count: Vec<u32>,
    pub v: u64,
    pub e: u64,
}

impl<'a> EdgeWalk<'a> {
    pub fn new(g: &'a Indexed, mask: u64) -> Self {
        let mut w = EdgeWalk {
            g,
            chosen: vec![false; g.edges.len()],
            count: vec![0; g.n()],
            v: 0,
            e: 0,
        };
        for j in 0..g.edges.len() {
            if mask >> j & 1 == 1 {
                w.toggle(j);
            }
        }
        w
    }
}

impl Walk for EdgeWalk<'_> {
    fn toggle(&mut self, bit: usize) {
        let add = !self.chosen[bit];
        self.chosen[bit] = add;
        for &x in &self.g.edges[bit] {
            let c = &mut self.count[x as usize];
            if add {
                if *c == 0 {
                    self.v += 1;
                }
                *c += 1;
            } else {
                *c -= 1;
                if *c == 0 {
                    self.v -= 1;
                }
            }
        }
        if add {
            self.e += 1;
        } else {
            self.e -= 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Route {
    Vertices,
    Edges,
}

fn route(g: &Hypergraph, cap: usize) -> Result<Route> {
    let (v, e) = (g.v(), g.e());
    if v <= e && v <= cap {
        Ok(Route::Vertices)
    } else if e <= cap {
        Ok(Route::Edges)
    } else if v <= cap {
        Ok(Route::Vertices)
    } else {
        Err(Error::capacity("vertex count", v, cap))
    }
}

fn edge_union_labels(ix: &Indexed, mask: u64) -> Vec<i64> {
    let mut vs: Vec<i64> = (0..ix.edges.len())
        .filter(|j| mask >> j & 1 == 1)
        .flat_map(|j| ix.edges[j].iter().map(|&x| ix.labels[x as usize]))
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// `ρ^max(G)` together with one sub-hypergraph attaining it.
///
/// Ties are broken towards fewer vertices, then towards the lexicographically
/// first subset, so the witness is deterministic.
pub fn max_density(g: &Hypergraph) -> Result<(Rational, Hypergraph)> {
    max_density_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

pub fn max_density_with_cap(g: &Hypergraph, cap: usize) -> Result<(Rational, Hypergraph)> {
    if g.v() == 0 {
        return Err(Error::Domain("max density of a hypergraph without vertices".into()));
    }
    if g.e() == 0 {
        let first = g.vertices().next().unwrap();
        return Ok((Rational::from_integer(0.into()), g.induced(&[first])));
    }
    let ix = Indexed::new(g);
    let (frac, witness) = match route(g, cap)? {
        Route::Vertices => {
            let universe: Vec<usize> = (0..ix.n()).collect();
            let ((Frac(e, v), _, _), mask) = best_subset(
                universe.len(),
                |m| VertexWalk::new(&ix, &universe, &[], m),
                |w, m| (w.v > 0).then_some((Frac(w.e, w.v), Reverse(w.v), Reverse(m))),
            )
            .expect("non-empty universe");
            let labels: Vec<i64> = (0..ix.n())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ix.labels[i])
                .collect();
            ((e, v), g.induced(&labels))
        }
        Route::Edges => {
            let ((Frac(e, v), _, _), mask) = best_subset(
                ix.edges.len(),
                |m| EdgeWalk::new(&ix, m),
                |w, m| (w.e > 0).then_some((Frac(w.e, w.v), Reverse(w.v), Reverse(m))),
            )
            .expect("at least one edge");
            // The induced hypergraph on the union has at least the same density,
            // hence exactly the maximum.
            let witness = g.induced(&edge_union_labels(&ix, mask));
            debug_assert_eq!(
                cmp_density(witness.e() as u64, witness.v() as u64, e, v),
                Ordering::Equal
            );
            ((e, v), witness)
        }
    };
    Ok((
        Rational::new(BigInt::from(frac.0), BigInt::from(frac.1)),
        witness,
    ))
}

/// True iff `ρ(G) > ρ(H)` for every proper sub-hypergraph `H` with at least one vertex.
pub fn is_strictly_balanced(g: &Hypergraph) -> Result<bool> {
    strictly_balanced_with_cap(g, DEFAULT_ENUMERATION_CAP)
}

pub fn strictly_balanced_with_cap(g: &Hypergraph, cap: usize) -> Result<bool> {
    let (v, e) = (g.v(), g.e());
    if v == 0 {
        return Err(Error::Domain("balance of a hypergraph without vertices".into()));
    }
    if e == 0 {
        return Ok(v == 1);
    }
    if !g.isolated_vertices().is_empty() {
        return Ok(false);
    }
    let ix = Indexed::new(g);
    let (v, e) = (v as u64, e as u64);
    let best = match route(g, cap)? {
        Route::Vertices => {
            let universe: Vec<usize> = (0..ix.n()).collect();
            let full = (1u64 << universe.len()) - 1;
            best_subset(
                universe.len(),
                |m| VertexWalk::new(&ix, &universe, &[], m),
                |w, m| (w.v > 0 && m != full).then_some((Frac(w.e, w.v), Reverse(m))),
            )
        }
        Route::Edges => {
            let full = (1u64 << ix.edges.len()) - 1;
            best_subset(
                ix.edges.len(),
                |m| EdgeWalk::new(&ix, m),
                |w, m| (w.e > 0 && m != full).then_some((Frac(w.e, w.v), Reverse(m))),
            )
        }
    };
    Ok(match best {
        None => true,
        Some(((Frac(be, bv), _), _)) => cmp_density(be, bv, e, v) == Ordering::Less,
    })
}
