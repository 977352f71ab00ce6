use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::hypercore::{group_order, refine, EmbedMode, Embedder, Hypergraph, Indexed, RootedPair, SearchCaps};
use crate::rational::Rational;
use crate::Result;

/// `Ñ`: copies of `H` in `host` that lie in no copy of `G` in `host`.
pub fn count_uncovered_copies(h: &Hypergraph, g: &Hypergraph, host: &Hypergraph) -> Result<u128> {
    count_uncovered_copies_with_caps(h, g, host, SearchCaps::default())
}

/// Each copy of `H` is represented by one embedding `ψ`; it is covered when
/// some embedding `η: H → G` and some `φ: G → host` satisfy `φ∘η = ψ`.
/// Ranging over every `η` absorbs the automorphisms of `H`.
pub fn count_uncovered_copies_with_caps(
    h: &Hypergraph,
    g: &Hypergraph,
    host: &Hypergraph,
    caps: SearchCaps,
) -> Result<u128> {
    h.check_arity(host)?;
    g.check_arity(host)?;
    caps.check(h)?;
    caps.check(g)?;
    let (hx, gx, hostx) = (Indexed::new(h), Indexed::new(g), Indexed::new(host));

    let mut inside_g: Vec<Vec<u32>> = Vec::new();
    Embedder::new(&hx, &gx, EmbedMode::Mono).for_each(|m| {
        inside_g.push(m.to_vec());
        true
    });

    let mut seen: HashSet<(Vec<u32>, Vec<Vec<u32>>)> = HashSet::new();
    let mut uncovered = 0u128;
    let mut failure = None;
    Embedder::new(&hx, &hostx, EmbedMode::Mono).for_each(|psi| {
        let mut vs = psi.to_vec();
        vs.sort_unstable();
        let mut es: Vec<Vec<u32>> = hx
            .edges
            .iter()
            .map(|e| {
                let mut img: Vec<u32> = e.iter().map(|&u| psi[u as usize]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        es.sort_unstable();
        if !seen.insert((vs, es)) {
            return true;
        }
        let covered = inside_g.iter().any(|eta| {
            let mut e = Embedder::new(&gx, &hostx, EmbedMode::Mono);
            for (p, &gq) in eta.iter().enumerate() {
                e = e.pin(gq as usize, psi[p] as usize);
            }
            e.exists()
        });
        if !covered {
            uncovered += 1;
        }
        if seen.len() > 50_000_000 {
            failure = Some(crate::Error::capacity("copies", seen.len(), 50_000_000));
            return false;
        }
        true
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(uncovered),
    }
}

/// The ingredients of the Poisson parameter `λ = (1/a(H))·exp(−a(H)/(a₁a₂))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PoissonParameter {
    /// `|Aut(H)|`.
    pub a_h: u128,
    /// Automorphisms of `H` that extend to automorphisms of `G`.
    pub a1: u128,
    /// Automorphisms of `G` fixing `V(H)` pointwise.
    pub a2: u128,
}

impl PoissonParameter {
    /// `1/a(H)`.
    pub fn scale(&self) -> Rational {
        Rational::new(BigInt::from(1), BigInt::from(self.a_h))
    }

    /// `a(H)/(a₁a₂)`.
    pub fn exponent(&self) -> Rational {
        Rational::new(BigInt::from(self.a_h), BigInt::from(self.a1) * BigInt::from(self.a2))
    }

    pub fn lambda(&self) -> f64 {
        (-(self.a_h as f64) / (self.a1 as f64 * self.a2 as f64)).exp() / self.a_h as f64
    }
}

pub fn poisson_parameter(pair: &RootedPair) -> Result<PoissonParameter> {
    poisson_parameter_with_caps(pair, SearchCaps::default())
}

pub fn poisson_parameter_with_caps(pair: &RootedPair, caps: SearchCaps) -> Result<PoissonParameter> {
    caps.check(pair.outer())?;
    let a_h = caps.automorphism_count(pair.inner())?;
    let gx = Indexed::new(pair.outer());
    let colour = refine(&gx, None);
    let emb = pair.embedding();
    let mut a1 = 0u128;
    for sigma in caps.automorphisms(pair.inner(), 1 << 20)? {
        let mut e = Embedder::new(&gx, &gx, EmbedMode::Mono).colours(&colour, &colour);
        for (x, y) in &sigma {
            e = e.pin(gx.index[&emb[x]], gx.index[&emb[y]]);
        }
        if e.exists() {
            a1 += 1;
        }
    }
    let roots: Vec<usize> = pair.root_vertices().iter().map(|v| gx.index[v]).collect();
    let rest: Vec<usize> = (0..gx.n()).filter(|x| !roots.contains(x)).collect();
    let a2 = group_order(&gx, &colour, &rest, &roots);
    Ok(PoissonParameter { a_h, a1, a2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::count_copies;
    use crate::rational::rat;
    use std::collections::BTreeMap;
    use crate::Vertex;

    /// Oracle over all vertex permutations.
    fn brute_parameters(pair: &RootedPair) -> PoissonParameter {
        fn perms(v: &[Vertex]) -> Vec<Vec<Vertex>> {
            if v.is_empty() {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for i in 0..v.len() {
                let mut rest = v.to_vec();
                let x = rest.remove(i);
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let (g, h) = (pair.outer(), pair.inner_image());
        let hv: Vec<Vertex> = h.vertices().collect();
        let gv: Vec<Vertex> = g.vertices().collect();
        let mut auts_g: Vec<BTreeMap<Vertex, Vertex>> = Vec::new();
        for p in perms(&gv) {
            let m: BTreeMap<Vertex, Vertex> = gv.iter().copied().zip(p).collect();
            if g.relabel(&m).unwrap() == *g {
                auts_g.push(m);
            }
        }
        let mut a_h = 0;
        let mut a1 = 0;
        for p in perms(&hv) {
            let m: BTreeMap<Vertex, Vertex> = hv.iter().copied().zip(p).collect();
            if h.relabel(&m).unwrap() == h {
                a_h += 1;
                if auts_g.iter().any(|t| hv.iter().all(|x| t[x] == m[x])) {
                    a1 += 1;
                }
            }
        }
        let a2 = auts_g.iter().filter(|t| hv.iter().all(|x| t[x] == *x)).count() as u128;
        PoissonParameter { a_h, a1, a2 }
    }


    #[test]
    fn uncovered_examples() {
        let h = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        assert_eq!(count_uncovered_copies(&h, &g, &h).unwrap(), 1);
        assert_eq!(count_uncovered_copies(&h, &g, &g).unwrap(), 0);
        assert_eq!(count_uncovered_copies(&h, &g, &Hypergraph::empty(3, 6).unwrap()).unwrap(), 0);
        let host = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5], [7, 8, 9]], []).unwrap();
        assert_eq!(count_uncovered_copies(&h, &g, &host).unwrap(), 1);
        assert!(count_uncovered_copies(&h, &g, &host).unwrap() <= count_copies(&h, &host).unwrap());
    }

    #[test]
    fn parameter_examples() {
        let g = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        let p = RootedPair::induced(g, &[1]).unwrap();
        let par = poisson_parameter(&p).unwrap();
        assert_eq!(par, PoissonParameter { a_h: 1, a1: 1, a2: 2 });
        assert_eq!(par, brute_parameters(&p));
        assert_eq!(par.exponent(), rat(1, 2));

        let h = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        let same = RootedPair::nested(h.clone(), h.clone()).unwrap();
        let par = poisson_parameter(&same).unwrap();
        assert_eq!((par.a1, par.a2), (par.a_h, 1));
        assert!((par.lambda() - (-1f64).exp() / par.a_h as f64).abs() < 1e-12);

        let g = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5], [5, 6, 7], [1, 6, 8]], []).unwrap();
        for roots in [vec![1, 3], vec![3, 5], vec![1, 2, 3], vec![2, 7]] {
            let p = RootedPair::induced(g.clone(), &roots).unwrap();
            assert_eq!(poisson_parameter(&p).unwrap(), brute_parameters(&p), "{roots:?}");
        }
    }
}
