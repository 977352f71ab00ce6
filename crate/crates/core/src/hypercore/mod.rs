//! Finite s-uniform hypergraphs and the structural operations on them.

mod density;
mod distance;
mod embed;
mod hypergraph;
mod indexed;
mod pair;
pub mod shg;

pub use density::{
    density, is_strictly_balanced, max_density, max_density_with_cap, strictly_balanced_with_cap,
    DEFAULT_ENUMERATION_CAP,
};
pub use distance::{distance, distance_matrix};
pub use embed::{
    automorphism_count, automorphisms, count_copies, count_embeddings, count_induced_copies,
    is_isomorphic, SearchCaps, DEFAULT_SEARCH_CAP,
};
pub use hypergraph::{Edge, Hypergraph, Vertex};
pub use pair::RootedPair;

pub(crate) use density::{best_subset, VertexWalk};
pub(crate) use embed::{group_order, refine, EmbedMode, Embedder};
pub(crate) use indexed::Indexed;
