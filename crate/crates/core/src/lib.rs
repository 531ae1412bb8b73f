pub mod config;
pub mod ontology;
pub mod rdf;
pub mod reasoner;
pub mod report;
pub mod service;
pub mod syntax;
