use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, Result};

/// Vertex label. Labels are arbitrary integers and need not be contiguous.
pub type Vertex = i64;

/// An edge, stored as its vertices in ascending order.
pub type Edge = Vec<Vertex>;

/// A finite s-uniform hypergraph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    arity: usize,
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<Edge>,
}

impl Hypergraph {
    pub const MIN_ARITY: usize = 3;

    pub fn new(arity: usize) -> Result<Self> {
        if arity < Self::MIN_ARITY {
            return Err(Error::Parameter(format!(
                "arity must be at least {}, got {arity}",
                Self::MIN_ARITY
            )));
        }
        Ok(Hypergraph {
            arity,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        })
    }

    /// Edgeless hypergraph on the given vertices.
    pub fn with_vertices(arity: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut g = Self::new(arity)?;
        g.vertices.extend(vertices);
        Ok(g)
    }

    /// Edgeless hypergraph on `1..=n`.
    pub fn empty(arity: usize, n: usize) -> Result<Self> {
        Self::with_vertices(arity, 1..=n as Vertex)
    }

    /// Builds a hypergraph from edges; vertices of the edges are added
    /// automatically, `extra` adds isolated vertices.
    pub fn from_edges<E, I>(arity: usize, edges: E, extra: I) -> Result<Self>
    where
        E: IntoIterator,
        E::Item: AsRef<[Vertex]>,
        I: IntoIterator<Item = Vertex>,
    {
        let mut g = Self::with_vertices(arity, extra)?;
        for e in edges {
            g.add_edge(e.as_ref())?;
        }
        Ok(g)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + DoubleEndedIterator + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        self.vertices.insert(v)
    }

    /// Normalises an edge: checks its size and distinctness and sorts it.
    pub fn normalize_edge(&self, edge: &[Vertex]) -> Result<Edge> {
        if edge.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: edge.len(),
            });
        }
        let mut e = edge.to_vec();
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("edge {edge:?} repeats a vertex")));
        }
        Ok(e)
    }

    /// Adds an edge (and any missing vertices). Returns false if it was present.
    pub fn add_edge(&mut self, edge: &[Vertex]) -> Result<bool> {
        let e = self.normalize_edge(edge)?;
        self.vertices.extend(e.iter().copied());
        Ok(self.edges.insert(e))
    }

    pub fn remove_edge(&mut self, edge: &[Vertex]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.remove(&e)
    }

    /// Removes a vertex together with every edge through it.
    pub fn remove_vertex(&mut self, v: Vertex) -> bool {
        self.edges.retain(|e| !e.contains(&v));
        self.vertices.remove(&v)
    }

    /// True iff the vertices form an edge. Order is irrelevant; repeated
    /// vertices never form an edge.
    pub fn has_edge(&self, vs: &[Vertex]) -> bool {
        if vs.len() != self.arity {
            return false;
        }
        let mut e = vs.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        let covered: BTreeSet<Vertex> = self.edges.iter().flatten().copied().collect();
        self.vertices.difference(&covered).copied().collect()
    }

    /// Sub-hypergraph induced on `keep` (labels outside the vertex set are ignored).
    pub fn induced<'a>(&self, keep: impl IntoIterator<Item = &'a Vertex>) -> Hypergraph {
        let vertices: BTreeSet<Vertex> = keep
            .into_iter()
            .filter(|v| self.vertices.contains(v))
            .copied()
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|v| vertices.contains(v)))
            .cloned()
            .collect();
        Hypergraph {
            arity: self.arity,
            vertices,
            edges,
        }
    }

    /// `self ⊆ other` as labelled hypergraphs.
    pub fn is_subgraph_of(&self, other: &Hypergraph) -> bool {
        self.arity == other.arity
            && self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
    }

    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        self.check_arity(other)?;
        Ok(Hypergraph {
            arity: self.arity,
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).cloned().collect(),
        })
    }

    /// Applies an injective relabelling. Every vertex must be mapped.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<Hypergraph> {
        let image = |v: &Vertex| {
            map.get(v)
                .copied()
                .ok_or_else(|| Error::Domain(format!("relabelling misses vertex {v}")))
        };
        let vertices: BTreeSet<Vertex> = self.vertices.iter().map(image).collect::<Result<_>>()?;
        if vertices.len() != self.vertices.len() {
            return Err(Error::Domain("relabelling is not injective".into()));
        }
        let mut g = Hypergraph {
            arity: self.arity,
            vertices,
            edges: BTreeSet::new(),
        };
        for e in &self.edges {
            let mapped: Vec<Vertex> = e.iter().map(image).collect::<Result<_>>()?;
            g.add_edge(&mapped)?;
        }
        Ok(g)
    }

    /// Relabels the vertices to `1..=v` preserving their order.
    pub fn compact(&self) -> Hypergraph {
        let map: BTreeMap<Vertex, Vertex> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as Vertex + 1))
            .collect();
        self.relabel(&map).expect("order-preserving relabelling is total and injective")
    }

    /// Returns a copy whose labels are shifted by `offset`.
    pub fn shifted(&self, offset: Vertex) -> Hypergraph {
        let map = self.vertices.iter().map(|&v| (v, v + offset)).collect();
        self.relabel(&map).expect("shift is injective")
    }

    pub(crate) fn check_arity(&self, other: &Hypergraph) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn max_label(&self) -> Option<Vertex> {
        self.vertices.iter().next_back().copied()
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(s={}, V={:?}, E={:?})", self.arity, self.vertices, self.edges)
    }
}
