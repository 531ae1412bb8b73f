//! In-memory RDF data model.

mod graph;
mod isomorphism;
mod term;
pub mod vocab;

pub use graph::Graph;
pub use isomorphism::{isomorphic, IsomorphismChecker, DEFAULT_MAPPING_BOUND};
pub use term::{is_absolute_iri, BlankNode, Iri, Literal, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RdfError {
    #[error("not an absolute IRI: {0:?}")]
    RelativeIri(String),
    #[error("blank node labels must not be empty")]
    EmptyBlankLabel,
    #[error("literal {0:?} cannot be a triple subject")]
    LiteralSubject(String),
    #[error("predicate must be an IRI, got {0}")]
    NonIriPredicate(String),
    #[error("isomorphism search exceeded {bound} candidate mappings")]
    IsomorphismCapacity { bound: usize },
}
