use std::collections::BTreeMap;

use super::{Hypergraph, Indexed, Vertex};
use crate::{Error, Result};

/// Default limit on the number of pattern vertices for isomorphism-type searches.
pub const DEFAULT_SEARCH_CAP: usize = 32;

const UNSET: u32 = u32::MAX;

/// Vertex limits for the backtracking searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub vertices: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            vertices: DEFAULT_SEARCH_CAP,
        }
    }
}

impl SearchCaps {
    pub fn new(vertices: usize) -> Self {
        SearchCaps { vertices }
    }

    pub(crate) fn check(&self, g: &Hypergraph) -> Result<()> {
        if g.v() > self.vertices {
            return Err(Error::capacity("search vertices", g.v(), self.vertices));
        }
        Ok(())
    }

    pub fn automorphism_count(&self, g: &Hypergraph) -> Result<u128> {
        self.check(g)?;
        let ix = Indexed::new(g);
        let colour = refine(&ix, None);
        let base: Vec<usize> = (0..ix.n()).collect();
        Ok(group_order(&ix, &colour, &base, &[]))
    }

    /// Every automorphism as a label map. Refuses groups above `limit` elements.
    pub fn automorphisms(&self, g: &Hypergraph, limit: u128) -> Result<Vec<BTreeMap<Vertex, Vertex>>> {
        let order = self.automorphism_count(g)?;
        if order > limit {
            return Err(Error::capacity("automorphisms", order as usize, limit as usize));
        }
        let ix = Indexed::new(g);
        let colour = refine(&ix, None);
        let mut out = Vec::with_capacity(order as usize);
        Embedder::new(&ix, &ix, EmbedMode::Mono)
            .colours(&colour, &colour)
            .for_each(|m| {
                out.push(
                    m.iter()
                        .enumerate()
                        .map(|(p, &q)| (ix.labels[p], ix.labels[q as usize]))
                        .collect(),
                );
                true
            });
        Ok(out)
    }

    pub fn count_embeddings(&self, motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
        self.embeddings(motif, host, EmbedMode::Mono)
    }

    pub fn count_copies(&self, motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
        let emb = self.count_embeddings(motif, host)?;
        Ok(emb / self.automorphism_count(motif)?)
    }

    pub fn count_induced_copies(&self, motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
        let emb = self.embeddings(motif, host, EmbedMode::Induced)?;
        Ok(emb / self.automorphism_count(motif)?)
    }

    pub fn is_isomorphic(&self, a: &Hypergraph, b: &Hypergraph) -> Result<bool> {
        a.check_arity(b)?;
        self.check(a)?;
        if a.v() != b.v() || a.e() != b.e() {
            return Ok(false);
        }
        // Refining on the disjoint union keeps the colours comparable.
        let offset = a.max_label().unwrap_or(0) - b.vertices().next().unwrap_or(0) + 1;
        let union = a.union(&b.shifted(offset))?;
        let ux = Indexed::new(&union);
        let colour = refine(&ux, None);
        let (ax, bx) = (Indexed::new(a), Indexed::new(b));
        let ca: Vec<u32> = ax.labels.iter().map(|v| colour[ux.index[v]]).collect();
        let cb: Vec<u32> = bx.labels.iter().map(|v| colour[ux.index[&(v + offset)]]).collect();
        let (mut sa, mut sb) = (ca.clone(), cb.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(false);
        }
        Ok(Embedder::new(&ax, &bx, EmbedMode::Mono)
            .colours(&ca, &cb)
            .exists())
    }

    fn embeddings(&self, motif: &Hypergraph, host: &Hypergraph, mode: EmbedMode) -> Result<u128> {
        motif.check_arity(host)?;
        self.check(motif)?;
        if motif.v() > host.v() {
            return Ok(0);
        }
        let (p, h) = (Indexed::new(motif), Indexed::new(host));
        Ok(Embedder::new(&p, &h, mode).count())
    }
}

/// `|Aut(G)|`.
pub fn automorphism_count(g: &Hypergraph) -> Result<u128> {
    SearchCaps::default().automorphism_count(g)
}

/// All automorphisms of `G`, in lexicographic order of the image sequence.
pub fn automorphisms(g: &Hypergraph) -> Result<Vec<BTreeMap<Vertex, Vertex>>> {
    SearchCaps::default().automorphisms(g, 1 << 20)
}

/// Injective vertex maps sending every motif edge onto a host edge.
pub fn count_embeddings(motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
    SearchCaps::default().count_embeddings(motif, host)
}

/// Number of (not necessarily induced) sub-hypergraphs of `host` isomorphic to `motif`.
pub fn count_copies(motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
    SearchCaps::default().count_copies(motif, host)
}

/// Number of induced sub-hypergraphs of `host` isomorphic to `motif`.
pub fn count_induced_copies(motif: &Hypergraph, host: &Hypergraph) -> Result<u128> {
    SearchCaps::default().count_induced_copies(motif, host)
}

pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Result<bool> {
    SearchCaps::default().is_isomorphic(a, b)
}

/// Colour refinement starting from degrees (optionally combined with `seed`).
/// A vertex colour becomes the old colour plus the multiset, over incident
/// edges, of the sorted colours of the other members. Colour ids are assigned
/// by sorting signatures, so equal structures get equal ids.
pub(crate) fn refine(g: &Indexed, seed: Option<&[u32]>) -> Vec<u32> {
    let n = g.n();
    let mut colour: Vec<u32> = (0..n)
        .map(|v| {
            let d = g.degree(v) as u32;
            match seed {
                Some(s) => s[v].wrapping_mul(1 << 16).wrapping_add(d),
                None => d,
            }
        })
        .collect();
    colour = compress(&colour);
    let mut classes = count_classes(&colour);
    loop {
        let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..n)
            .map(|v| {
                let mut around: Vec<Vec<u32>> = g.incidence[v]
                    .iter()
                    .map(|&j| {
                        let mut c: Vec<u32> = g.edges[j as usize]
                            .iter()
                            .filter(|&&u| u as usize != v)
                            .map(|&u| colour[u as usize])
                            .collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let next = compress(&sigs);
        let c = count_classes(&next);
        colour = next;
        if c == classes {
            return colour;
        }
        classes = c;
    }
}

fn compress<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn count_classes(c: &[u32]) -> usize {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Order of the subgroup of automorphisms (respecting `colour`) that fix every
/// vertex of `fixed`, restricted to `base`: the product of orbit sizes along
/// the stabiliser chain `base[0], base[1], ...`. With `base` covering every
/// non-fixed vertex this is the order of the pointwise stabiliser of `fixed`;
/// with a colour-closed `base` it is the order of the group's action on it.
pub(crate) fn group_order(g: &Indexed, colour: &[u32], base: &[usize], fixed: &[usize]) -> u128 {
    let mut pins: Vec<(usize, usize)> = fixed.iter().map(|&v| (v, v)).collect();
    let mut order: u128 = 1;
    for &b in base {
        if pins.iter().any(|&(p, _)| p == b) {
            continue;
        }
        let mut orbit = 0u128;
        for w in 0..g.n() {
            if colour[w] != colour[b] || pins.iter().any(|&(_, q)| q == w) {
                continue;
            }
            let found = if w == b {
                true
            } else {
                let mut e = Embedder::new(g, g, EmbedMode::Mono).colours(colour, colour);
                for &(p, q) in &pins {
                    e = e.pin(p, q);
                }
                e.pin(b, w).exists()
            };
            if found {
                orbit += 1;
            }
        }
        order *= orbit;
        pins.push((b, b));
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EmbedMode {
    /// Edges map onto edges; non-edges are unconstrained.
    Mono,
    /// Additionally, host edges inside the image come from pattern edges.
    Induced,
}

/// Backtracking search for injective maps from `pat` into `host` (vertex indices).
pub(crate) struct Embedder<'a> {
    pat: &'a Indexed,
    host: &'a Indexed,
    mode: EmbedMode,
    pins: Vec<(usize, usize)>,
    colours: Option<(&'a [u32], &'a [u32])>,
}

struct Plan {
    order: Vec<usize>,
    /// Pattern edges completed when `order[i]` is placed.
    complete: Vec<Vec<u32>>,
    /// Pattern edges through `order[i]` still missing later vertices.
    partial: Vec<Vec<u32>>,
    /// An earlier vertex sharing an edge with `order[i]`.
    anchor: Vec<Option<usize>>,
    pinned: Vec<Option<usize>>,
    /// Length of the trailing run of isolated, unpinned, uncoloured vertices.
    free_tail: usize,
}

struct State<'p> {
    plan: &'p Plan,
    map: Vec<u32>,
    inv: Vec<u32>,
    buf: Vec<u32>,
}

impl<'a> Embedder<'a> {
    pub fn new(pat: &'a Indexed, host: &'a Indexed, mode: EmbedMode) -> Self {
        Embedder {
            pat,
            host,
            mode,
            pins: Vec::new(),
            colours: None,
        }
    }

    /// Forces pattern vertex `p` onto host vertex `q`.
    pub fn pin(mut self, p: usize, q: usize) -> Self {
        self.pins.push((p, q));
        self
    }

    /// Pattern vertex `p` may only go to host vertices of colour `pc[p]`.
    pub fn colours(mut self, pc: &'a [u32], hc: &'a [u32]) -> Self {
        self.colours = Some((pc, hc));
        self
    }


    fn plan(&self) -> Option<Plan> {
        let n = self.pat.n();
        if n > self.host.n() {
            return None;
        }
        let mut pinned = vec![None; n];
        for &(p, q) in &self.pins {
            match pinned[p] {
                Some(prev) if prev != q => return None,
                _ => pinned[p] = Some(q),
            }
        }
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut touch = vec![0usize; n];
        let place = |v: usize, order: &mut Vec<usize>, placed: &mut Vec<bool>, touch: &mut Vec<usize>| {
            placed[v] = true;
            order.push(v);
            for &j in &self.pat.incidence[v] {
                for &u in &self.pat.edges[j as usize] {
                    touch[u as usize] += 1;
                }
            }
        };
        for (p, q) in pinned.iter().enumerate() {
            if q.is_some() {
                place(p, &mut order, &mut placed, &mut touch);
            }
        }
        while order.len() < n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by(|&a, &b| {
                    (touch[a], self.pat.degree(a))
                        .cmp(&(touch[b], self.pat.degree(b)))
                        .then(b.cmp(&a))
                })
                .unwrap();
            place(v, &mut order, &mut placed, &mut touch);
        }
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut complete = vec![Vec::new(); n];
        let mut partial = vec![Vec::new(); n];
        for (j, e) in self.pat.edges.iter().enumerate() {
            let last = e.iter().map(|&u| pos[u as usize]).max().unwrap();
            complete[last].push(j as u32);
            for &u in e {
                if pos[u as usize] != last {
                    partial[pos[u as usize]].push(j as u32);
                }
            }
        }
        let anchor = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                self.pat.incidence[v]
                    .iter()
                    .flat_map(|&j| self.pat.edges[j as usize].iter())
                    .map(|&u| u as usize)
                    .filter(|&u| pos[u] < i)
                    .min_by_key(|&u| pos[u])
            })
            .collect();
        let free_tail = if self.mode == EmbedMode::Mono && self.colours.is_none() {
            order
                .iter()
                .rev()
                .take_while(|&&v| self.pat.degree(v) == 0 && pinned[v].is_none())
                .count()
        } else {
            0
        };
        let pinned = order.iter().map(|&v| pinned[v]).collect();
        Some(Plan {
            order,
            complete,
            partial,
            anchor,
            pinned,
            free_tail,
        })
    }

    fn state<'p>(&self, plan: &'p Plan) -> State<'p> {
        State {
            plan,
            map: vec![UNSET; self.pat.n()],
            inv: vec![UNSET; self.host.n()],
            buf: Vec::with_capacity(self.pat.arity),
        }
    }

    fn admissible(&self, st: &mut State, i: usize, q: usize) -> bool {
        let p = st.plan.order[i];
        if st.inv[q] != UNSET {
            return false;
        }
        if let Some((pc, hc)) = self.colours {
            if pc[p] != hc[q] {
                return false;
            }
        }
        if self.host.degree(q) < self.pat.degree(p) {
            return false;
        }
        for &j in &st.plan.complete[i] {
            st.buf.clear();
            for &u in &self.pat.edges[j as usize] {
                let m = if u as usize == p { q as u32 } else { st.map[u as usize] };
                st.buf.push(m);
            }
            if !self.host.has_edge(&st.buf) {
                return false;
            }
        }
        for &j in &st.plan.partial[i] {
            st.buf.clear();
            st.buf.push(q as u32);
            for &u in &self.pat.edges[j as usize] {
                let m = st.map[u as usize];
                if m != UNSET {
                    st.buf.push(m);
                }
            }
            if !self.host.covered_by_edge(&st.buf) {
                return false;
            }
        }
        if self.mode == EmbedMode::Induced {
            for &j in &self.host.incidence[q] {
                st.buf.clear();
                let mut inside = true;
                for &u in &self.host.edges[j as usize] {
                    let pre = if u as usize == q { p as u32 } else { st.inv[u as usize] };
                    if pre == UNSET {
                        inside = false;
                        break;
                    }
                    st.buf.push(pre);
                }
                if inside && !self.pat.has_edge(&st.buf) {
                    return false;
                }
            }
        }
        true
    }

    fn candidates(&self, st: &State, i: usize) -> Vec<usize> {
        if let Some(q) = st.plan.pinned[i] {
            return vec![q];
        }
        match st.plan.anchor[i] {
            Some(a) => self.host.neighbours(st.map[a] as usize),
            None => (0..self.host.n()).collect(),
        }
    }

    fn assign(st: &mut State, p: usize, q: usize) {
        st.map[p] = q as u32;
        st.inv[q] = p as u32;
    }

    fn unassign(st: &mut State, p: usize, q: usize) {
        st.map[p] = UNSET;
        st.inv[q] = UNSET;
    }

    fn walk(&self, st: &mut State, i: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if i == st.plan.order.len() {
            return visit(&st.map);
        }
        let p = st.plan.order[i];
        for q in self.candidates(st, i) {
            if self.admissible(st, i, q) {
                Self::assign(st, p, q);
                let go_on = self.walk(st, i + 1, visit);
                Self::unassign(st, p, q);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    fn tally(&self, st: &mut State, i: usize) -> u128 {
        let n = st.plan.order.len();
        if i + st.plan.free_tail == n {
            let free = (0..self.host.n())
                .filter(|&q| st.inv[q] == UNSET)
                .count() as u128;
            let r = st.plan.free_tail as u128;
            if free < r {
                return 0;
            }
            return (0..r).map(|t| free - t).product();
        }
        let p = st.plan.order[i];
        let mut total = 0;
        for q in self.candidates(st, i) {
            if self.admissible(st, i, q) {
                Self::assign(st, p, q);
                total += self.tally(st, i + 1);
                Self::unassign(st, p, q);
            }
        }
        total
    }

    /// Calls `visit` with each map (indexed by pattern vertex) until it returns false.
    pub fn for_each(&self, mut visit: impl FnMut(&[u32]) -> bool) {
        if let Some(plan) = self.plan() {
            let mut st = self.state(&plan);
            self.walk(&mut st, 0, &mut visit);
        }
    }

    pub fn count(&self) -> u128 {
        match self.plan() {
            Some(plan) => {
                let mut st = self.state(&plan);
                self.tally(&mut st, 0)
            }
            None => 0,
        }
    }

    pub fn first(&self) -> Option<Vec<u32>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }
}
