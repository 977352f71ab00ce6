use std::collections::{HashMap, HashSet};

use super::{Hypergraph, Vertex};

/// Dense, index-based view of a hypergraph used by the search routines.
/// Vertex `i` is the `i`-th smallest label.
#[derive(Debug, Clone)]
pub(crate) struct Indexed {
    pub arity: usize,
    pub labels: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    pub edges: Vec<Vec<u32>>,
    pub incidence: Vec<Vec<u32>>,
    edge_set: HashSet<Box<[u32]>>,
}

impl Indexed {
    pub fn new(g: &Hypergraph) -> Self {
        let labels: Vec<Vertex> = g.vertices().collect();
        let index: HashMap<Vertex, usize> =
            labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<Vec<u32>> = g
            .edges()
            .map(|e| e.iter().map(|v| index[v] as u32).collect())
            .collect();
        let mut incidence = vec![Vec::new(); labels.len()];
        for (j, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(j as u32);
            }
        }
        let edge_set = edges.iter().map(|e| e.clone().into_boxed_slice()).collect();
        Indexed {
            arity: g.arity(),
            labels,
            index,
            edges,
            incidence,
            edge_set,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Edge test on vertex indices in any order.
    pub fn has_edge(&self, vs: &[u32]) -> bool {
        if vs.len() != self.arity {
            return false;
        }
        let mut buf = [0u32; 32];
        if vs.len() > buf.len() {
            let mut v = vs.to_vec();
            v.sort_unstable();
            return v.windows(2).all(|w| w[0] < w[1]) && self.edge_set.contains(v.as_slice());
        }
        let buf = &mut buf[..vs.len()];
        buf.copy_from_slice(vs);
        buf.sort_unstable();
        buf.windows(2).all(|w| w[0] < w[1]) && self.edge_set.contains(&*buf)
    }

    /// Is there an edge containing every vertex of `vs`?
    pub fn covered_by_edge(&self, vs: &[u32]) -> bool {
        match vs {
            [] => !self.edges.is_empty(),
            [v] => !self.incidence[*v as usize].is_empty(),
            _ => {
                let pivot = vs
                    .iter()
                    .min_by_key(|&&v| self.incidence[v as usize].len())
                    .copied()
                    .unwrap();
                self.incidence[pivot as usize]
                    .iter()
                    .any(|&j| vs.iter().all(|v| self.edges[j as usize].contains(v)))
            }
        }
    }

    /// Vertices sharing an edge with `v`, ascending, without `v` itself.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.incidence[v]
            .iter()
            .flat_map(|&j| self.edges[j as usize].iter().map(|&u| u as usize))
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
