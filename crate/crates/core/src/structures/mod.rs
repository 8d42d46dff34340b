//! Finite graphs with an optional `S`-partition, subsets, embeddings and canonical forms.

mod canon;
mod embed;
mod graph;
mod io;
mod vertex_set;

pub use canon::{canonical_form, canonical_form_colored, canonical_labeling, CanonicalForm};
pub use embed::{
    all_embeddings, automorphisms, copies_over_base, for_each_embedding, is_embedding, is_isomorphic,
    visit_copies_over_base, Embedding, Pattern,
};
pub use graph::{FiniteStructure, Induced};
pub use io::{format_structure, parse_single, parse_structures, NamedStructure};
pub use vertex_set::{SubsetIter, VertexId, VertexIter, VertexSet, MAX_VERTICES};
