use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::hypercore::{max_density, Hypergraph, RootedPair, Vertex};
use crate::rational::{rat, Rational};
use crate::{Error, Result};

/// Witness for one of the three cyclic attachment templates.
///
/// `path` lists `y_1, …, y_{k(s−1)}` in order, so its last entry is the vertex
/// where the closing edge meets the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CyclicPattern {
    /// Closing edge `{y_{k(s−1)}, z_1..z_l, u_1..u_{s−1−l}}`, `u` drawn from
    /// `x_1` and the earlier path vertices.
    FirstType {
        k: usize,
        l: usize,
        x1: Vertex,
        path: Vec<Vertex>,
        z: Vec<Vertex>,
        u: Vec<Vertex>,
    },
    /// Closing edge `{x_2, y_{k(s−1)}, z_1..z_l, u_1..u_{s−2−l}}` with `x_2 ≠ x_1`.
    SecondTypePath {
        k: usize,
        l: usize,
        x1: Vertex,
        x2: Vertex,
        path: Vec<Vertex>,
        z: Vec<Vertex>,
        u: Vec<Vertex>,
    },
    /// A single edge through `l ≥ 2` old vertices.
    SecondTypeEdge { l: usize, x: Vec<Vertex>, y: Vec<Vertex> },
}

impl CyclicPattern {
    pub fn name(&self) -> &'static str {
        match self {
            CyclicPattern::FirstType { .. } => "first-type",
            CyclicPattern::SecondTypePath { .. } => "second-type-path",
            CyclicPattern::SecondTypeEdge { .. } => "second-type-edge",
        }
    }

    pub fn l(&self) -> usize {
        match self {
            CyclicPattern::FirstType { l, .. }
            | CyclicPattern::SecondTypePath { l, .. }
            | CyclicPattern::SecondTypeEdge { l, .. } => *l,
        }
    }

    /// Path length; zero for the single-edge template.
    pub fn k(&self) -> usize {
        match self {
            CyclicPattern::FirstType { k, .. } | CyclicPattern::SecondTypePath { k, .. } => *k,
            CyclicPattern::SecondTypeEdge { .. } => 0,
        }
    }
}

/// `m/(m(s−1)−1)`.
pub fn cyclic_density_bound(s: usize, m: usize) -> Result<Rational> {
    if m == 0 || s < 3 {
        return Err(Error::Parameter(format!("need m >= 1 and s >= 3, got m = {m}, s = {s}")));
    }
    Ok(rat(m as i64, (m * (s - 1) - 1) as i64))
}

/// Matches `E(G) ∖ E(H)` against the templates (first type, then second type
/// with a path, then the single edge) and checks `ρ^max(G) < m/(m(s−1)−1)`.
pub fn match_cyclic_extension(pair: &RootedPair, m: usize) -> Result<Option<CyclicPattern>> {
    let bound = cyclic_density_bound(pair.outer().arity(), m)?;
    let Some(pattern) = match_template(pair.outer(), &pair.inner_image(), m) else {
        return Ok(None);
    };
    let (rho, _) = max_density(pair.outer())?;
    Ok((rho < bound).then_some(pattern))
}

/// Template matching without the density condition.
pub(crate) fn match_template(g: &Hypergraph, h: &Hypergraph, m: usize) -> Option<CyclicPattern> {
    let s = g.arity();
    let ext: Vec<&Vec<Vertex>> = g.edges().filter(|e| !h.has_edge(e)).collect();
    let new: BTreeSet<Vertex> = g.vertices().filter(|v| !h.contains_vertex(*v)).collect();
    if ext.is_empty() {
        return None;
    }
    let k = ext.len() - 1;
    if k >= 1 && k < m {
        for second in [false, true] {
            for c in 0..ext.len() {
                let rest: Vec<&Vec<Vertex>> = (0..ext.len()).filter(|&i| i != c).map(|i| ext[i]).collect();
                let Some(path) = order_path(&rest, h) else {
                    continue;
                };
                if let Some(p) = close_path(&path, ext[c], h, &new, s, second) {
                    return Some(p);
                }
            }
        }
    }
    if ext.len() == 1 {
        let e = ext[0];
        let x: Vec<Vertex> = e.iter().copied().filter(|v| h.contains_vertex(*v)).collect();
        let y: Vec<Vertex> = e.iter().copied().filter(|v| !h.contains_vertex(*v)).collect();
        let l = x.len();
        if (2..s).contains(&l) && y.iter().copied().collect::<BTreeSet<_>>() == new {
            return Some(CyclicPattern::SecondTypeEdge { l, x, y });
        }
    }
    None
}

struct LoosePath {
    x1: Vertex,
    /// `y` vertices in path order.
    body: Vec<Vertex>,
    /// Candidates for `y_{k(s−1)}`: vertices of the last edge not shared backwards.
    ends: Vec<Vertex>,
    k: usize,
}

/// Orders `edges` as a loose path `e_1, …, e_k` leaving `H` at a single vertex.
fn order_path(edges: &[&Vec<Vertex>], h: &Hypergraph) -> Option<LoosePath> {
    let touching: Vec<usize> = (0..edges.len())
        .filter(|&i| edges[i].iter().any(|v| h.contains_vertex(*v)))
        .collect();
    if touching.len() != 1 {
        return None;
    }
    let first = touching[0];
    let roots: Vec<Vertex> = edges[first].iter().copied().filter(|v| h.contains_vertex(*v)).collect();
    if roots.len() != 1 {
        return None;
    }
    let x1 = roots[0];
    let mut order = vec![first];
    let mut used = vec![false; edges.len()];
    used[first] = true;
    while order.len() < edges.len() {
        let cur = edges[*order.last().unwrap()];
        let next: Vec<usize> = (0..edges.len())
            .filter(|&i| !used[i] && edges[i].iter().any(|v| cur.contains(v)))
            .collect();
        if next.len() != 1 {
            return None;
        }
        used[next[0]] = true;
        order.push(next[0]);
    }
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let shared = edges[order[i]].iter().filter(|v| edges[order[j]].contains(v)).count();
            if shared != usize::from(j == i + 1) {
                return None;
            }
        }
    }
    let mut body = Vec::new();
    let mut back: Option<Vertex> = Some(x1);
    for (pos, &i) in order.iter().enumerate() {
        let e = edges[i];
        let fwd = order
            .get(pos + 1)
            .and_then(|&n| e.iter().copied().find(|v| edges[n].contains(v)));
        if pos > 0 {
            body.push(back.unwrap());
        }
        let free: Vec<Vertex> = e.iter().copied().filter(|v| Some(*v) != back && Some(*v) != fwd).collect();
        if pos + 1 == order.len() {
            body.extend(free.iter().copied());
            return Some(LoosePath {
                x1,
                body,
                ends: free,
                k: order.len(),
            });
        }
        body.extend(free);
        back = fwd;
    }
    None
}

fn close_path(
    path: &LoosePath,
    closing: &[Vertex],
    h: &Hypergraph,
    new: &BTreeSet<Vertex>,
    s: usize,
    second: bool,
) -> Option<CyclicPattern> {
    for &end in &path.ends {
        if !closing.contains(&end) {
            continue;
        }
        let ys: Vec<Vertex> = path.body.iter().copied().filter(|&v| v != end).chain([end]).collect();
        let on_path = |v: Vertex| v == path.x1 || ys.contains(&v);
        let rest: Vec<Vertex> = closing.iter().copied().filter(|&v| v != end).collect();
        let olds: Vec<Vertex> = rest.iter().copied().filter(|&v| h.contains_vertex(v) && v != path.x1).collect();
        let z: Vec<Vertex> = rest.iter().copied().filter(|&v| !on_path(v) && !h.contains_vertex(v)).collect();
        let u: Vec<Vertex> = rest.iter().copied().filter(|&v| on_path(v)).collect();
        let covered: BTreeSet<Vertex> = ys.iter().chain(&z).copied().collect();
        if covered != *new {
            continue;
        }
        let l = z.len();
        if !second {
            if olds.is_empty() && l < s - 1 {
                return Some(CyclicPattern::FirstType {
                    k: path.k,
                    l,
                    x1: path.x1,
                    path: ys,
                    z,
                    u,
                });
            }
        } else if olds.len() == 1 && !u.contains(&path.x1) && l <= s - 2 {
            return Some(CyclicPattern::SecondTypePath {
                k: path.k,
                l,
                x1: path.x1,
                x2: olds[0],
                path: ys,
                z,
                u,
            });
        }
    }
    None
}

/// Edge sets that could form a cyclic `m`-extension of `cur` inside `host`:
/// single edges through at least two old vertices, and loose paths of at most
/// `m − 1` edges leaving `cur` at one vertex followed by any edge through an
/// end vertex. Candidates are validated by the template matcher afterwards.
fn candidate_extensions(host: &Hypergraph, cur: &Hypergraph, m: usize) -> Vec<Vec<Vec<Vertex>>> {
    let s = host.arity();
    let free: Vec<&Vec<Vertex>> = host.edges().filter(|e| !cur.has_edge(e)).collect();
    let olds = |e: &[Vertex]| e.iter().filter(|v| cur.contains_vertex(**v)).count();
    let mut out: Vec<Vec<Vec<Vertex>>> = Vec::new();
    let mut seen: HashSet<Vec<Vec<Vertex>>> = HashSet::new();
    let mut emit = |mut set: Vec<Vec<Vertex>>, out: &mut Vec<Vec<Vec<Vertex>>>| {
        set.sort();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    };
    for e in &free {
        let o = olds(e);
        if (2..s).contains(&o) {
            emit(vec![(*e).clone()], &mut out);
        }
    }
    if m < 2 {
        return out;
    }
    // Depth-first over loose paths; `tips` are the vertices of the last edge
    // that the next edge (or the closing edge) may attach to.
    type Visit<'v> = dyn FnMut(&[Vec<Vertex>], &[Vertex]) + 'v;
    fn grow(
        free: &[&Vec<Vertex>],
        cur: &Hypergraph,
        path: &mut Vec<Vec<Vertex>>,
        seen_v: &mut BTreeSet<Vertex>,
        tips: Vec<Vertex>,
        max_k: usize,
        visit: &mut Visit<'_>,
    ) {
        visit(path, &tips);
        if path.len() == max_k {
            return;
        }
        for e in free {
            if path.contains(*e) || e.iter().any(|v| cur.contains_vertex(*v)) {
                continue;
            }
            let shared: Vec<Vertex> = e.iter().copied().filter(|v| seen_v.contains(v)).collect();
            if shared.len() != 1 || !tips.contains(&shared[0]) {
                continue;
            }
            let next_tips: Vec<Vertex> = e.iter().copied().filter(|v| *v != shared[0]).collect();
            path.push((*e).clone());
            for v in &next_tips {
                seen_v.insert(*v);
            }
            grow(free, cur, path, seen_v, next_tips.clone(), max_k, visit);
            for v in &next_tips {
                seen_v.remove(v);
            }
            path.pop();
        }
    }
    for e1 in &free {
        if olds(e1) != 1 {
            continue;
        }
        let x1 = *e1.iter().find(|v| cur.contains_vertex(**v)).unwrap();
        let tips: Vec<Vertex> = e1.iter().copied().filter(|v| *v != x1).collect();
        let mut seen_v: BTreeSet<Vertex> = tips.iter().copied().collect();
        seen_v.insert(x1);
        let mut path = vec![(*e1).clone()];
        let mut found: Vec<Vec<Vec<Vertex>>> = Vec::new();
        grow(&free, cur, &mut path, &mut seen_v, tips, m - 1, &mut |p, tips| {
            for c in &free {
                if p.contains(*c) || !c.iter().any(|v| tips.contains(v)) {
                    continue;
                }
                let mut set = p.to_vec();
                set.push((*c).clone());
                found.push(set);
            }
        });
        for set in found {
            emit(set, &mut out);
        }
    }
    out
}

fn extend(cur: &Hypergraph, edges: &[Vec<Vertex>]) -> Hypergraph {
    let mut g = cur.clone();
    for e in edges {
        for &v in e {
            g.add_vertex(v);
        }
        g.add_edge(e).expect("host edges share the arity");
    }
    g
}

/// An `m`-decomposition `G_0 = ({root}, ∅) ⊊ G_1 ⊊ … ⊊ G_t` of `G` with
/// `V(G_t) = V(G)`, every step a cyclic `m`-extension. Edges of `G` inside
/// `V(G_t)` that the chain does not use are allowed. `None` if no chain exists.
pub fn find_m_decomposition(g: &Hypergraph, m: usize, root: Vertex) -> Result<Option<Vec<Hypergraph>>> {
    let bound = cyclic_density_bound(g.arity(), m)?;
    if !g.contains_vertex(root) {
        return Err(Error::Domain(format!("root {root} is not a vertex")));
    }
    if g.e() > 64 {
        return Err(Error::capacity("decomposition edges", g.e(), 64));
    }
    // Sub-hypergraphs of a graph below the bound stay below it.
    let globally_sparse = max_density(g)?.0 < bound;
    let start = Hypergraph::with_vertices(g.arity(), [root])?;
    let mut failed: HashSet<Vec<Vec<Vertex>>> = HashSet::new();
    let mut chain = vec![start.clone()];
    if search(g, m, &bound, globally_sparse, start, &mut chain, &mut failed)? {
        Ok(Some(chain))
    } else {
        Ok(None)
    }
}

fn search(
    g: &Hypergraph,
    m: usize,
    bound: &Rational,
    sparse: bool,
    cur: Hypergraph,
    chain: &mut Vec<Hypergraph>,
    failed: &mut HashSet<Vec<Vec<Vertex>>>,
) -> Result<bool> {
    if cur.v() == g.v() {
        return Ok(true);
    }
    let key: Vec<Vec<Vertex>> = cur.edges().cloned().collect();
    if failed.contains(&key) {
        return Ok(false);
    }
    for set in candidate_extensions(g, &cur, m) {
        let next = extend(&cur, &set);
        if match_template(&next, &cur, m).is_none() {
            continue;
        }
        if !sparse && max_density(&next)?.0 >= *bound {
            continue;
        }
        chain.push(next.clone());
        if search(g, m, bound, sparse, next, chain, failed)? {
            return Ok(true);
        }
        chain.pop();
    }
    failed.insert(key);
    Ok(false)
}

/// `G ∈ H_m`: some vertex roots an `m`-decomposition, and `ρ^max(G)` is below
/// the cap (needed once `G` has edges beyond the chain).
pub fn in_cyclic_class(g: &Hypergraph, m: usize) -> Result<bool> {
    let bound = cyclic_density_bound(g.arity(), m)?;
    if g.v() == 0 {
        return Ok(false);
    }
    let sparse = max_density(g)?.0 < bound;
    for root in g.vertices() {
        if let Some(chain) = find_m_decomposition(g, m, root)? {
            if sparse || chain.last().is_some_and(|last| last.e() == g.e()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// No cyclic `m`-extension of `G` inside `host` fails to be a cyclic
/// `m`-extension of `H`. An extension counts for `H` when it meets `V(G)` only
/// inside `V(H)` and the same edges form a cyclic `m`-extension of `H`.
pub fn is_cyclically_m_maximal(pair: &RootedPair, host: &Hypergraph, m: usize) -> Result<bool> {
    cyclic_density_bound(host.arity(), m)?;
    let (g, h) = (pair.outer(), pair.inner_image());
    g.check_arity(host)?;
    if !g.is_subgraph_of(host) {
        return Err(Error::Precondition("the pair must be a sub-hypergraph of the host".into()));
    }
    for set in candidate_extensions(host, g, m) {
        let bigger = extend(g, &set);
        let as_g = RootedPair::nested(bigger, g.clone())?;
        if match_cyclic_extension(&as_g, m)?.is_none() {
            continue;
        }
        let touches_rest = set
            .iter()
            .flatten()
            .any(|v| g.contains_vertex(*v) && !h.contains_vertex(*v));
        if touches_rest {
            return Ok(false);
        }
        let as_h = RootedPair::nested(extend(&h, &set), h.clone())?;
        if match_cyclic_extension(&as_h, m)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
