use std::collections::{BTreeMap, BTreeSet};

use super::classify::{alpha_parts, classify_pair, PairClass};
use crate::hypercore::{EmbedMode, Embedder, Hypergraph, Indexed, RootedPair, Vertex, DEFAULT_SEARCH_CAP};
use crate::rational::Rational;
use crate::{Error, Result};

/// Upper bound on the number of (sub-hypergraph, placement) candidates a
/// maximality check will visit before giving up.
pub const DEFAULT_CANDIDATE_CAP: usize = 5_000_000;

/// `G̃` is a strict `(G, H)`-extension: under `correspondence`, edges of `G`
/// outside `H` and edges of `G̃` outside `H̃` match in both directions.
pub fn is_strict_extension(
    candidate: &RootedPair,
    template: &RootedPair,
    correspondence: &BTreeMap<Vertex, Vertex>,
) -> Result<bool> {
    extension_check(candidate, template, correspondence, true)
}

/// Only the forward direction: template edges outside `H` land outside `H̃`.
pub fn is_extension(
    candidate: &RootedPair,
    template: &RootedPair,
    correspondence: &BTreeMap<Vertex, Vertex>,
) -> Result<bool> {
    extension_check(candidate, template, correspondence, false)
}

fn extension_check(
    candidate: &RootedPair,
    template: &RootedPair,
    corr: &BTreeMap<Vertex, Vertex>,
    strict: bool,
) -> Result<bool> {
    candidate.outer().check_arity(template.outer())?;
    let (g, gt) = (template.outer(), candidate.outer());
    if corr.len() != g.v() || g.vertices().any(|v| !corr.contains_key(&v)) {
        return Err(Error::Domain("correspondence must cover exactly the template vertices".into()));
    }
    let image: BTreeSet<Vertex> = corr.values().copied().collect();
    if image.len() != corr.len() {
        return Err(Error::Domain("correspondence is not injective".into()));
    }
    if image != *gt.vertex_set() {
        return Err(Error::Domain("correspondence must be onto the candidate vertices".into()));
    }
    let (h, ht) = (template.inner_image(), candidate.inner_image());
    if h.vertices().any(|v| !ht.contains_vertex(corr[&v])) {
        return Err(Error::Domain("correspondence must send inner vertices to inner vertices".into()));
    }
    let outside = |big: &Hypergraph, small: &Hypergraph, e: &[Vertex]| big.has_edge(e) && !small.has_edge(e);
    for e in g.edges().filter(|e| !h.has_edge(e)) {
        let mapped: Vec<Vertex> = e.iter().map(|v| corr[v]).collect();
        if !outside(gt, &ht, &mapped) {
            return Ok(false);
        }
    }
    if strict {
        let inverse: BTreeMap<Vertex, Vertex> = corr.iter().map(|(&a, &b)| (b, a)).collect();
        for e in gt.edges().filter(|e| !ht.has_edge(e)) {
            let back: Vec<Vertex> = e.iter().map(|v| inverse[v]).collect();
            if !outside(g, &h, &back) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Visits the `k`-subsets of `0..n` in lexicographic order until `visit` returns false.
pub(crate) fn for_combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            let go_on = go(n, k, i + 1, cur, visit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k > n {
        return true;
    }
    go(n, k, 0, &mut Vec::with_capacity(k), &mut visit)
}

fn for_permutations(items: &[Vertex], mut visit: impl FnMut(&[Vertex]) -> bool) -> bool {
    fn go(v: &mut Vec<Vertex>, k: usize, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if k == v.len() {
            return visit(v);
        }
        for i in k..v.len() {
            v.swap(k, i);
            let go_on = go(v, k + 1, visit);
            v.swap(k, i);
            if !go_on {
                return false;
            }
        }
        true
    }
    go(&mut items.to_vec(), 0, &mut visit)
}

fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn factorial(n: usize) -> usize {
    (1..=n).fold(1usize, |a, b| a.saturating_mul(b))
}

fn check_nested(pair: &RootedPair, host: &Hypergraph) -> Result<()> {
    pair.outer().check_arity(host)?;
    if !pair.outer().is_subgraph_of(host) {
        return Err(Error::Precondition("the pair must be a sub-hypergraph of the host".into()));
    }
    Ok(())
}

/// `T̃ ⊄ H̃` for `T̃ = G̃[W]`.
fn escapes_inner(gt: &Hypergraph, ht: &Hypergraph, w: &[Vertex]) -> bool {
    w.iter().any(|v| !ht.contains_vertex(*v)) || gt.induced(w).edges().any(|e| !ht.has_edge(e))
}

/// Some host edge inside `Y ∪ (V(G̃) ∖ W)` meets both parts.
fn crosses(host: &Indexed, y: &[usize], rest: &[bool]) -> bool {
    let mut in_y = vec![false; host.n()];
    for &q in y {
        in_y[q] = true;
    }
    y.iter().any(|&q| {
        host.incidence[q].iter().any(|&j| {
            let e = &host.edges[j as usize];
            e.iter().all(|&u| in_y[u as usize] || rest[u as usize]) && e.iter().any(|&u| rest[u as usize])
        })
    })
}

/// `(G̃, H̃)` is `(K, T)`-maximal in `host`.
///
/// For every `W ⊆ V(G̃)` of size `v(T)` with `T̃ = G̃[W] ⊄ H̃` and every
/// bijection `V(T) → W`, the search looks for new vertices `Y` outside `V(G̃)`
/// such that, on `W ∪ Y`, the host edges not in `T̃` correspond exactly to the
/// edges of `K` not in `T`, and no host edge inside `Y ∪ (V(G̃) ∖ W)` meets
/// both `Y` and `V(G̃) ∖ W`. Any such witness makes the pair non-maximal.
pub fn is_kt_maximal(pair: &RootedPair, kt: &RootedPair, host: &Hypergraph) -> Result<bool> {
    check_nested(pair, host)?;
    kt.outer().check_arity(host)?;
    let (gt, ht) = (pair.outer(), pair.inner_image());
    let t = kt.inner().v();
    if t > gt.v() {
        return Ok(true);
    }
    if kt.outer().v() > DEFAULT_SEARCH_CAP {
        return Err(Error::capacity("search vertices", kt.outer().v(), DEFAULT_SEARCH_CAP));
    }
    let work = binomial_usize(gt.v(), t).saturating_mul(factorial(t));
    if work > DEFAULT_CANDIDATE_CAP {
        return Err(Error::capacity("maximality candidates", work, DEFAULT_CANDIDATE_CAP));
    }

    let k = kt.outer();
    let t_vertices = kt.root_vertices();
    let t_img = kt.inner_image();
    let in_t = |e: &[Vertex]| e.iter().all(|v| t_img.contains_vertex(*v));
    let k_inside: Vec<&Vec<Vertex>> = k.edges().filter(|e| in_t(e) && !t_img.has_edge(e)).collect();
    let mut k_ext = Hypergraph::with_vertices(k.arity(), k.vertices())?;
    for e in k.edges().filter(|e| !in_t(e)) {
        k_ext.add_edge(e)?;
    }
    let pat = Indexed::new(&k_ext);
    let full = Indexed::new(host);
    let gt_labels: Vec<Vertex> = gt.vertices().collect();

    let mut found = false;
    for_combinations(gt_labels.len(), t, |idx| {
        let w: Vec<Vertex> = idx.iter().map(|&i| gt_labels[i]).collect();
        if !escapes_inner(gt, &ht, &w) {
            return true;
        }
        let t_tilde = gt.induced(&w);
        let host_w = host.induced(&w);
        let host_inside: Vec<&Vec<Vertex>> = host_w.edges().filter(|e| !t_tilde.has_edge(e)).collect();
        if host_inside.len() != k_inside.len() {
            return true;
        }
        let w_set: BTreeSet<Vertex> = w.iter().copied().collect();
        let mut reduced = host.clone();
        for v in gt.vertices().filter(|v| !w_set.contains(v)) {
            reduced.remove_vertex(v);
        }
        for e in host_w.edges() {
            reduced.remove_edge(e);
        }
        let rx = Indexed::new(&reduced);
        let mut rest = vec![false; full.n()];
        for v in gt.vertices().filter(|v| !w_set.contains(v)) {
            rest[full.index[&v]] = true;
        }
        for_permutations(&w, |perm| {
            let sigma: BTreeMap<Vertex, Vertex> = t_vertices.iter().copied().zip(perm.iter().copied()).collect();
            let inside_ok = k_inside.iter().all(|e| {
                let img: Vec<Vertex> = e.iter().map(|v| sigma[v]).collect();
                host_w.has_edge(&img) && !t_tilde.has_edge(&img)
            });
            if !inside_ok {
                return true;
            }
            let mut emb = Embedder::new(&pat, &rx, EmbedMode::Induced);
            for (a, b) in &sigma {
                emb = emb.pin(pat.index[a], rx.index[b]);
            }
            emb.for_each(|m| {
                let y: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| !t_img.contains_vertex(pat.labels[*p]))
                    .map(|(_, &q)| full.index[&rx.labels[q as usize]])
                    .collect();
                if !crosses(&full, &y, &rest) {
                    found = true;
                }
                !found
            });
            !found
        });
        !found
    });
    Ok(!found)
}

/// `(G̃, H̃)` is `(K, T)`-maximal for every `α`-rigid or `α`-neutral `(K, T)`
/// with `v(T) ≤ v(G̃)` and `v(K, T) ≤ r`.
///
/// The family is never materialised: for each admissible `T̃ = G̃[W]` and each
/// set `Y` of at most `r` host vertices outside `G̃`, the pair
/// `(host[W ∪ Y], T̃)` is the only `(K, T)` that `W ∪ Y` can realise strictly,
/// so it suffices to classify that pair and test the side condition.
pub fn is_kr_maximal(pair: &RootedPair, host: &Hypergraph, alpha: &Rational, r: usize) -> Result<bool> {
    check_nested(pair, host)?;
    let (p, q) = alpha_parts(alpha)?;
    let (gt, ht) = (pair.outer(), pair.inner_image());
    let gt_labels: Vec<Vertex> = gt.vertices().collect();
    if gt_labels.len() >= 40 {
        return Err(Error::capacity("extension vertices", gt_labels.len(), 39));
    }
    let outside: Vec<Vertex> = host.vertices().filter(|v| !gt.contains_vertex(*v)).collect();
    let ys: usize = (0..=r).map(|j| binomial_usize(outside.len(), j)).fold(0, usize::saturating_add);
    let work = ((1usize << gt_labels.len()) - 1).saturating_mul(ys);
    if work > DEFAULT_CANDIDATE_CAP {
        return Err(Error::capacity("maximality candidates", work, DEFAULT_CANDIDATE_CAP));
    }
    let full = Indexed::new(host);
    for mask in 1u64..1 << gt_labels.len() {
        let w: Vec<Vertex> = (0..gt_labels.len()).filter(|i| mask >> i & 1 == 1).map(|i| gt_labels[i]).collect();
        if !escapes_inner(gt, &ht, &w) {
            continue;
        }
        let t_tilde = gt.induced(&w);
        let mut rest = vec![false; full.n()];
        for v in gt.vertices().filter(|v| !w.contains(v)) {
            rest[full.index[&v]] = true;
        }
        for size in 0..=r.min(outside.len()) {
            let mut hit: Result<bool> = Ok(false);
            for_combinations(outside.len(), size, |idx| {
                let mut vs = w.clone();
                vs.extend(idx.iter().map(|&i| outside[i]));
                let k = host.induced(&vs);
                let de = (k.e() - t_tilde.e()) as i128;
                if de == 0 || q * size as i128 - p * de > 0 {
                    return true;
                }
                let y: Vec<usize> = idx.iter().map(|&i| full.index[&outside[i]]).collect();
                if crosses(&full, &y, &rest) {
                    return true;
                }
                let verdict = RootedPair::nested(k, t_tilde.clone()).and_then(|kt| classify_pair(&kt, alpha));
                match verdict {
                    Ok(PairClass::Rigid | PairClass::Neutral) => {
                        hit = Ok(true);
                        false
                    }
                    Ok(_) => true,
                    Err(e) => {
                        hit = Err(e);
                        false
                    }
                }
            });
            if hit? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All strict `(G, H)`-extensions of `tuple` in `host`, with `H̃ = host[tuple]`.
/// `tuple[i]` plays the `i`-th smallest vertex of the image of `H` in `G`.
/// Each extension is returned as the map `V(G) → V(host)`.
pub fn strict_extensions(
    template: &RootedPair,
    host: &Hypergraph,
    tuple: &[Vertex],
) -> Result<Vec<BTreeMap<Vertex, Vertex>>> {
    let g = template.outer();
    g.check_arity(host)?;
    let roots = template.root_vertices();
    if tuple.len() != roots.len() {
        return Err(Error::Domain(format!("tuple has {} vertices, the inner graph {}", tuple.len(), roots.len())));
    }
    let distinct: BTreeSet<Vertex> = tuple.iter().copied().collect();
    if distinct.len() != tuple.len() || tuple.iter().any(|v| !host.contains_vertex(*v)) {
        return Err(Error::Domain("tuple must consist of distinct host vertices".into()));
    }
    if g.v() > DEFAULT_SEARCH_CAP {
        return Err(Error::capacity("search vertices", g.v(), DEFAULT_SEARCH_CAP));
    }
    let h = template.inner_image();
    let inside = |e: &[Vertex]| e.iter().all(|v| h.contains_vertex(*v));
    // H̃ is induced, so a template edge inside V(H) but outside H has no partner.
    if g.edges().any(|e| inside(e) && !h.has_edge(e)) {
        return Ok(Vec::new());
    }
    let mut pat_g = Hypergraph::with_vertices(g.arity(), g.vertices())?;
    for e in g.edges().filter(|e| !inside(e)) {
        pat_g.add_edge(e)?;
    }
    let mut host_r = host.clone();
    for e in host.induced(tuple).edges() {
        host_r.remove_edge(e);
    }
    let (pat, hx) = (Indexed::new(&pat_g), Indexed::new(&host_r));
    let mut emb = Embedder::new(&pat, &hx, EmbedMode::Induced);
    for (a, b) in roots.iter().zip(tuple) {
        emb = emb.pin(pat.index[a], hx.index[b]);
    }
    let mut out = Vec::new();
    emb.for_each(|m| {
        out.push(
            m.iter()
                .enumerate()
                .map(|(p, &q)| (pat.labels[p], hx.labels[q as usize]))
                .collect(),
        );
        true
    });
    Ok(out)
}

/// `N^r`: strict `(G, H)`-extensions of `tuple` that are `(K, T)`-maximal for
/// every `α`-rigid or neutral `(K, T)` with `v(K, T) ≤ r`. Extensions are
/// counted as vertex maps, so automorphisms of `G` fixing `V(H)` count separately.
pub fn count_maximal_extensions(
    template: &RootedPair,
    host: &Hypergraph,
    tuple: &[Vertex],
    alpha: &Rational,
    r: usize,
) -> Result<u128> {
    let maps = strict_extensions(template, host, tuple)?;
    let mut count = 0;
    for map in maps {
        let vs: Vec<Vertex> = map.values().copied().collect();
        let pair = RootedPair::induced(host.induced(&vs), tuple)?;
        if is_kr_maximal(&pair, host, alpha, r)? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn edge_pair() -> RootedPair {
        let g = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        RootedPair::induced(g, &[1]).unwrap()
    }

    #[test]
    fn strictness() {
        let t = edge_pair();
        let c = RootedPair::induced(Hypergraph::from_edges(3, [[10, 20, 30]], []).unwrap(), &[10]).unwrap();
        let corr: BTreeMap<Vertex, Vertex> = [(1, 10), (2, 20), (3, 30)].into();
        assert!(is_strict_extension(&c, &t, &corr).unwrap());
        // Extra edge on the extension vertices: the backward direction fails.
        let g2 = Hypergraph::from_edges(3, [[10, 20, 30]], []).unwrap();
        let t2 = RootedPair::induced(Hypergraph::from_edges(3, [[1, 2, 3]], [4]).unwrap(), &[1]).unwrap();
        let mut big = g2.clone();
        big.add_vertex(40);
        big.add_edge(&[20, 30, 40]).unwrap();
        let c2 = RootedPair::induced(big, &[10]).unwrap();
        let corr2: BTreeMap<Vertex, Vertex> = [(1, 10), (2, 20), (3, 30), (4, 40)].into();
        assert!(!is_strict_extension(&c2, &t2, &corr2).unwrap());
        assert!(is_extension(&c2, &t2, &corr2).unwrap());
        let bad: BTreeMap<Vertex, Vertex> = [(1, 10), (2, 10), (3, 30)].into();
        assert!(is_strict_extension(&c, &t, &bad).is_err());
    }

    fn kt_path() -> RootedPair {
        // T = {a, b} edgeless, K = a loose path of two edges from a to b.
        let k = Hypergraph::from_edges(3, [[101, 103, 104], [104, 105, 102]], []).unwrap();
        RootedPair::induced(k, &[101, 102]).unwrap()
    }

    #[test]
    fn kt_maximal_examples() {
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        let pair = RootedPair::induced(g.clone(), &[1]).unwrap();
        assert!(is_kt_maximal(&pair, &kt_path(), &g).unwrap());
        // Attach a two-edge path between 4 and 5 through new vertices.
        let mut host = g.clone();
        for v in [6, 7, 8] {
            host.add_vertex(v);
        }
        host.add_edge(&[4, 6, 7]).unwrap();
        host.add_edge(&[7, 8, 5]).unwrap();
        assert!(!is_kt_maximal(&pair, &kt_path(), &host).unwrap());
        // The same path hanging between two inner vertices is allowed.
        let h2 = Hypergraph::from_edges(3, [[1, 2, 3]], []).unwrap();
        let pair2 = RootedPair::induced(h2.clone(), &[1, 2, 3]).unwrap();
        let mut host2 = h2.clone();
        for v in [6, 7, 8] {
            host2.add_vertex(v);
        }
        host2.add_edge(&[1, 6, 7]).unwrap();
        host2.add_edge(&[7, 8, 2]).unwrap();
        assert!(is_kt_maximal(&pair2, &kt_path(), &host2).unwrap());
        // v(T) larger than v(G̃) is vacuous.
        let tiny = RootedPair::induced(Hypergraph::with_vertices(3, [1]).unwrap(), &[1]).unwrap();
        assert!(is_kt_maximal(&tiny, &kt_path(), &Hypergraph::with_vertices(3, [1]).unwrap()).unwrap());
    }

    #[test]
    fn side_condition_blocks_attached_witness() {
        let g = Hypergraph::from_edges(3, [[1, 2, 3], [3, 4, 5]], []).unwrap();
        let pair = RootedPair::induced(g.clone(), &[1]).unwrap();
        let mut host = g.clone();
        for v in [6, 7, 8] {
            host.add_vertex(v);
        }
        host.add_edge(&[4, 6, 7]).unwrap();
        host.add_edge(&[7, 8, 5]).unwrap();
        host.add_edge(&[6, 2, 3]).unwrap();
        // The only witness Y = {6, 7, 8} over W = {4, 5} is tied to V(G̃) ∖ W by {6, 2, 3}.
        assert!(is_kt_maximal(&pair, &kt_path(), &host).unwrap());
    }

    #[test]
    fn strict_extension_enumeration() {
        let template = edge_pair();
        let host = Hypergraph::from_edges(3, [[1, 2, 3], [1, 4, 5], [2, 3, 6]], []).unwrap();
        let maps = strict_extensions(&template, &host, &[1]).unwrap();
        assert_eq!(maps.len(), 4);
        assert!(maps.iter().all(|m| m[&1] == 1));
        assert!(strict_extensions(&template, &host, &[1, 2]).is_err());
        // Edge plus an isolated vertex: the isolated vertex may not land on 4,
        // since {2, 3, 4} would then be an unmatched edge of the copy.
        let t2 = RootedPair::induced(Hypergraph::from_edges(3, [[1, 2, 3]], [4]).unwrap(), &[1]).unwrap();
        let host2 = Hypergraph::from_edges(3, [[1, 2, 3], [2, 3, 4]], [7]).unwrap();
        let maps = strict_extensions(&t2, &host2, &[1]).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(maps.iter().all(|m| m[&4] == 7));
    }

    #[test]
    fn maximal_extension_counter() {
        let template = edge_pair();
        let host = Hypergraph::from_edges(3, [[1, 2, 3], [2, 3, 4], [1, 5, 6]], []).unwrap();
        // Both edges through 1 are strict extensions; {2,3,4} hangs off T̃ = {2,3}.
        let maps = strict_extensions(&template, &host, &[1]).unwrap();
        assert_eq!(maps.len(), 4);
        // With α = 1 the single edge {2,3,4} over T̃ = {2,3} has f = 1 − 1 = 0,
        // which is neutral, so the two maps onto {1,2,3} are not maximal.
        assert_eq!(count_maximal_extensions(&template, &host, &[1], &rat(1, 1), 1).unwrap(), 2);
        // With α = 1/2 it is safe, so every extension is maximal.
        assert_eq!(count_maximal_extensions(&template, &host, &[1], &rat(1, 2), 1).unwrap(), 4);
        assert_eq!(count_maximal_extensions(&template, &host, &[1], &rat(1, 1), 0).unwrap(), 4);
    }
}
