//! Ontology loading and the indexed class/axiom view the reasoner works on.

mod fetch;
mod model;

pub use fetch::{
    fetch_ontology, load_ontology, FetchError, FetchOptions, LoadedOntology, OntologyHandle, Origin,
    MAX_IMPORT_DEPTH, OFFLINE_ENV,
};
pub use model::{
    extract, ClassAnnotations, ClassId, ExistentialRestriction, OntologyModel, SubClassAxiom, SuperClass,
};

use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("unknown class <{0}>")]
    UnknownClass(Iri),
}
