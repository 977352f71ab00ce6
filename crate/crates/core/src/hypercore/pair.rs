use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{Hypergraph, Vertex};
use crate::rational::Rational;
use crate::{Error, Result};

/// `H ⊂ G` with an explicit embedding of `H` into `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedPair {
    outer: Hypergraph,
    inner: Hypergraph,
    embedding: BTreeMap<Vertex, Vertex>,
}

impl RootedPair {
    /// Checks that `embedding` is injective, total on `V(H)` and maps edges to edges.
    pub fn new(outer: Hypergraph, inner: Hypergraph, embedding: BTreeMap<Vertex, Vertex>) -> Result<Self> {
        outer.check_arity(&inner)?;
        if embedding.len() != inner.v() || inner.vertices().any(|v| !embedding.contains_key(&v)) {
            return Err(Error::Domain("embedding must cover exactly the inner vertices".into()));
        }
        let mut seen: Vec<Vertex> = embedding.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != embedding.len() {
            return Err(Error::Domain("embedding is not injective".into()));
        }
        if let Some(v) = seen.iter().find(|v| !outer.contains_vertex(**v)) {
            return Err(Error::Domain(format!("embedding image {v} is not an outer vertex")));
        }
        for e in inner.edges() {
            let image: Vec<Vertex> = e.iter().map(|v| embedding[v]).collect();
            if !outer.has_edge(&image) {
                return Err(Error::Domain(format!("inner edge {e:?} does not map to an outer edge")));
            }
        }
        Ok(RootedPair {
            outer,
            inner,
            embedding,
        })
    }

    /// Pair whose inner graph is a labelled sub-hypergraph of the outer one.
    pub fn nested(outer: Hypergraph, inner: Hypergraph) -> Result<Self> {
        let id = inner.vertices().map(|v| (v, v)).collect();
        Self::new(outer, inner, id)
    }

    /// `(G, G[W])` for a vertex set `W`.
    pub fn induced(outer: Hypergraph, inner_vertices: &[Vertex]) -> Result<Self> {
        if let Some(v) = inner_vertices.iter().find(|v| !outer.contains_vertex(**v)) {
            return Err(Error::Domain(format!("vertex {v} not in outer hypergraph")));
        }
        let inner = outer.induced(inner_vertices);
        Self::nested(outer, inner)
    }

    pub fn outer(&self) -> &Hypergraph {
        &self.outer
    }

    pub fn inner(&self) -> &Hypergraph {
        &self.inner
    }

    pub fn embedding(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.embedding
    }

    /// The image of `H` inside `G`, as a labelled sub-hypergraph of `G`.
    pub fn inner_image(&self) -> Hypergraph {
        self.inner
            .relabel(&self.embedding)
            .expect("embedding validated at construction")
    }

    /// Image of `V(H)` in ascending order.
    pub fn root_vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.embedding.values().copied().collect();
        vs.sort_unstable();
        vs
    }

    /// `v(G, H)`.
    pub fn v_diff(&self) -> usize {
        self.outer.v() - self.inner.v()
    }

    /// `e(G, H)`.
    pub fn e_diff(&self) -> usize {
        self.outer.e() - self.inner.e()
    }

    /// `ρ(G, H)`; undefined when `v(G, H) = 0`.
    pub fn density(&self) -> Result<Rational> {
        if self.v_diff() == 0 {
            return Err(Error::Domain("pair density with v(G,H) = 0".into()));
        }
        Ok(Rational::new(
            BigInt::from(self.e_diff()),
            BigInt::from(self.v_diff()),
        ))
    }
}
