use num_traits::ToPrimitive;
use serde::Serialize;

use crate::hypercore::{best_subset, Indexed, RootedPair, VertexWalk, DEFAULT_ENUMERATION_CAP};
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairClass {
    Safe,
    Rigid,
    Neutral,
    Other,
}

impl PairClass {
    pub fn name(self) -> &'static str {
        match self {
            PairClass::Safe => "safe",
            PairClass::Rigid => "rigid",
            PairClass::Neutral => "neutral",
            PairClass::Other => "other",
        }
    }
}

/// `f_α(G, H) = v(G, H) − α·e(G, H)`.
pub fn f_alpha(pair: &RootedPair, alpha: &Rational) -> Rational {
    Rational::from_integer(pair.v_diff().into()) - alpha * Rational::from_integer(pair.e_diff().into())
}

/// `α = p/q` as machine integers, so `q·f_α = q·Δv − p·Δe` stays exact.
pub(crate) fn alpha_parts(alpha: &Rational) -> Result<(i128, i128)> {
    match (alpha.numer().to_i128(), alpha.denom().to_i128()) {
        (Some(p), Some(q)) if q > 0 && p.abs() < 1 << 60 && q < 1 << 60 => Ok((p, q)),
        _ => Err(Error::Parameter(format!("alpha {alpha} is too large"))),
    }
}

pub fn classify_pair(pair: &RootedPair, alpha: &Rational) -> Result<PairClass> {
    classify_pair_with_cap(pair, alpha, DEFAULT_ENUMERATION_CAP)
}

/// Safe, rigid and neutral are tested in that order; the first that holds wins.
/// Only `G == H` satisfies more than one of them (all three, vacuously).
///
/// Intermediate `K` range over all sub-hypergraphs between `H` and `G`. For a
/// fixed vertex set the extreme values of `f_α` are attained by induced
/// sub-hypergraphs, so the search walks vertex sets `V(H) ⊆ W ⊆ V(G)` only.
pub fn classify_pair_with_cap(pair: &RootedPair, alpha: &Rational, cap: usize) -> Result<PairClass> {
    let (p, q) = alpha_parts(alpha)?;
    let g = Indexed::new(pair.outer());
    let roots: Vec<usize> = pair.root_vertices().iter().map(|v| g.index[v]).collect();
    let mut is_root = vec![false; g.n()];
    for &r in &roots {
        is_root[r] = true;
    }
    let universe: Vec<usize> = (0..g.n()).filter(|&x| !is_root[x]).collect();
    if universe.len() > cap {
        return Err(Error::capacity("extension vertices", universe.len(), cap));
    }
    let (h_v, h_e) = (pair.inner().v() as i128, pair.inner().e() as i128);
    let (g_v, g_e) = (g.n() as i128, g.edges.len() as i128);
    // G[V(H)] may carry edges of G that are not in H.
    let base_extra = pair.outer().induced(&pair.root_vertices()).e() as i128 - h_e;
    let full = (1u64 << universe.len()) - 1;
    let scaled = |v: i128, e: i128| q * v - p * e;

    // Safe: minimum of f(G[W], H) over all W except the trivial K = H.
    let min_rel = best_subset(
        universe.len(),
        |m| VertexWalk::new(&g, &universe, &roots, m),
        |w, m| {
            if m == 0 && base_extra == 0 {
                return None;
            }
            Some(std::cmp::Reverse(scaled(w.v as i128 - h_v, w.e as i128 - h_e)))
        },
    );
    let safe = min_rel.as_ref().is_none_or(|(k, _)| k.0 > 0);
    if safe {
        return Ok(PairClass::Safe);
    }

    // Rigid: maximum of f(G, G[W]) over W ≠ V(G).
    let max_rest = best_subset(
        universe.len(),
        |m| VertexWalk::new(&g, &universe, &roots, m),
        |w, m| (m != full).then(|| scaled(g_v - w.v as i128, g_e - w.e as i128)),
    );
    if max_rest.is_none_or(|(k, _)| k < 0) {
        return Ok(PairClass::Rigid);
    }

    // Neutral: f(G, H) = 0 and f(G[W], H) > 0 for proper W, K ≠ H.
    if scaled(g_v - h_v, g_e - h_e) == 0 {
        let min_proper = best_subset(
            universe.len(),
            |m| VertexWalk::new(&g, &universe, &roots, m),
            |w, m| {
                if m == full || (m == 0 && base_extra == 0) {
                    return None;
                }
                Some(std::cmp::Reverse(scaled(w.v as i128 - h_v, w.e as i128 - h_e)))
            },
        );
        if min_proper.is_none_or(|(k, _)| k.0 > 0) {
            return Ok(PairClass::Neutral);
        }
    }
    Ok(PairClass::Other)
}

/// `ρ(K, H) < ρ(G, H)` for every `H ⊂ K ⊊ G`, which is the same as `(G, H)`
/// being neutral at `α = 1/ρ(G, H)`.
pub fn is_pair_strictly_balanced(pair: &RootedPair) -> Result<bool> {
    if pair.v_diff() == 0 {
        return Err(Error::Domain("pair density with v(G,H) = 0".into()));
    }
    if pair.e_diff() == 0 {
        return Ok(pair.v_diff() == 1);
    }
    let alpha = pair.density()?.recip();
    Ok(classify_pair(pair, &alpha)? == PairClass::Neutral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use num_traits::Zero;
    use crate::Hypergraph;

    fn one_edge() -> RootedPair {
        let g = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        RootedPair::induced(g, &[1]).unwrap()
    }

    /// Oracle: every sub-hypergraph `H ⊆ K ⊆ G` by edge subsets and vertex subsets.
    fn brute_classify(pair: &RootedPair, alpha: &Rational) -> PairClass {
        let g = pair.outer();
        let h = pair.inner_image();
        let extra_v: Vec<i64> = g.vertices().filter(|v| !h.contains_vertex(*v)).collect();
        let extra_e: Vec<Vec<i64>> = g.edges().filter(|e| !h.has_edge(e)).cloned().collect();
        let f = |dv: usize, de: usize| Rational::from_integer(dv.into()) - alpha * Rational::from_integer(de.into());
        let mut ks = Vec::new();
        for vm in 0u32..1 << extra_v.len() {
            let mut vs: Vec<i64> = h.vertices().collect();
            vs.extend((0..extra_v.len()).filter(|i| vm >> i & 1 == 1).map(|i| extra_v[i]));
            for em in 0u32..1 << extra_e.len() {
                let es: Vec<&Vec<i64>> = (0..extra_e.len()).filter(|i| em >> i & 1 == 1).map(|i| &extra_e[i]).collect();
                if es.iter().all(|e| e.iter().all(|x| vs.contains(x))) {
                    ks.push((vs.len() - h.v(), es.len()));
                }
            }
        }
        let (gv, ge) = (pair.v_diff(), pair.e_diff());
        let strict_mid = |&&(v, e): &&(usize, usize)| (v, e) != (0, 0) && (v, e) != (gv, ge);
        if ks.iter().filter(|&&(v, e)| (v, e) != (0, 0)).all(|&(v, e)| f(v, e) > int(0)) {
            return PairClass::Safe;
        }
        if ks.iter().filter(|&&(v, e)| (v, e) != (gv, ge)).all(|&(v, e)| f(gv - v, ge - e) < int(0)) {
            return PairClass::Rigid;
        }
        if f(gv, ge) == int(0) && ks.iter().filter(strict_mid).all(|&(v, e)| f(v, e) > int(0)) {
            return PairClass::Neutral;
        }
        PairClass::Other
    }

    #[test]
    fn f_alpha_examples() {
        assert_eq!(f_alpha(&one_edge(), &rat(7, 4)), rat(1, 4));
        let g = Hypergraph::from_edges(3, [[1, 2, 3]], [4]).unwrap();
        let p = RootedPair::induced(g, &[1, 2, 3]).unwrap();
        assert_eq!(f_alpha(&p, &rat(7, 4)), int(1));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_pair(&one_edge(), &rat(7, 4)).unwrap(), PairClass::Safe);
        let path = Hypergraph::from_edges(3, [[1, 3, 4], [4, 5, 2]], []).unwrap();
        let p = RootedPair::induced(path, &[1, 2]).unwrap();
        assert_eq!(classify_pair(&p, &rat(7, 4)).unwrap(), PairClass::Rigid);
        assert_eq!(brute_classify(&p, &rat(7, 4)), PairClass::Rigid);
        // Two edges hanging off one vertex.
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [2, 3, 4]], []).unwrap();
        let p = RootedPair::induced(g, &[1]).unwrap();
        assert_eq!(classify_pair(&p, &int(2)).unwrap(), brute_classify(&p, &int(2)));
    }

    #[test]
    fn agrees_with_brute_force() {
        let graphs = [
            Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5], [5, 6, 1]], []).unwrap(),
            Hypergraph::from_edges(3, [[1, 2, 3], [1, 2, 4], [3, 4, 5]], [6]).unwrap(),
            Hypergraph::from_edges(3, [[1, 2, 3], [2, 3, 4], [3, 4, 5], [1, 4, 5]], []).unwrap(),
        ];
        let alphas = [rat(1, 2), rat(3, 4), int(1), rat(3, 2), rat(7, 4), int(2), rat(5, 2)];
        for g in &graphs {
            for roots in [vec![1], vec![1, 2], vec![1, 3], vec![2, 4, 5]] {
                let p = RootedPair::induced(g.clone(), &roots).unwrap();
                for a in &alphas {
                    assert_eq!(classify_pair(&p, a).unwrap(), brute_classify(&p, a), "{g:?} {roots:?} {a}");
                }
            }
        }
        // Non-induced inner graph: G[V(H)] has an edge that H lacks.
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        let h = Hypergraph::with_vertices(3, [1, 2, 3]).unwrap();
        let p = RootedPair::nested(g, h).unwrap();
        for a in &alphas {
            assert_eq!(classify_pair(&p, a).unwrap(), brute_classify(&p, a), "{a}");
        }
    }

    #[test]
    fn pair_balance() {
        let path = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        assert!(!is_pair_strictly_balanced(&RootedPair::induced(path.clone(), &[1]).unwrap()).unwrap());
        assert!(is_pair_strictly_balanced(&RootedPair::induced(path, &[1, 5]).unwrap()).unwrap());
        let edge = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        assert!(is_pair_strictly_balanced(&RootedPair::induced(edge, &[1]).unwrap()).unwrap());
    }

    #[test]
    fn classes_imply_sign() {
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [2, 3, 4], [4, 5, 6]], []).unwrap();
        for a in [rat(1, 3), rat(3, 2), int(2), int(3)] {
            let p = RootedPair::induced(g.clone(), &[1]).unwrap();
            let f = f_alpha(&p, &a);
            match classify_pair(&p, &a).unwrap() {
                PairClass::Safe => assert!(f > int(0)),
                PairClass::Rigid => assert!(f < int(0)),
                PairClass::Neutral => assert!(f.is_zero()),
                PairClass::Other => {}
            }
        }
    }
}
