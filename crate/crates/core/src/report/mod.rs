//! Annotated snippets, individual minting, part-of linking and export.

mod manifest;
mod session;

pub use manifest::{ingest_manifest, IngestOptions, Ingested, Manifest, ManifestSnippet};
pub use session::{
    open_session, AnnotatedSnippet, ClassInfo, LinkedPair, PublishResult, ReportSession, SessionConfig, SnippetRow,
    TEXT_CONTENT_LOCAL,
};

use serde::Serialize;

use crate::ontology::FetchError;
use crate::reasoner::ReasonerError;
use crate::syntax::SyntaxError;

/// One rejected snippet from a batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotationIssue {
    /// Zero-based position in the input.
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub message: String,
}

impl std::fmt::Display for AnnotationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.id {
            Some(id) => write!(f, "snippet #{} ({id}): {}", self.index, self.message),
            None => write!(f, "snippet #{}: {}", self.index, self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("annotation error: {0:?} is not a class of the ontology")]
    UnknownClass(String),
    #[error("no snippet with id {0:?}")]
    UnknownSnippet(String),
    #[error("the session has no snippets to encode")]
    EmptySession,
    #[error("nothing to export: encode the session first")]
    NotEncoded,
    #[error("{} snippet(s) could not be annotated:\n{}", .0.len(), render_issues(.0))]
    Annotations(Vec<AnnotationIssue>),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn render_issues(issues: &[AnnotationIssue]) -> String {
    issues.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n")
}

impl ReportError {
    /// Stable machine-readable token.
    pub fn code(&self) -> &'static str {
        match self {
            ReportError::Configuration(_) => "configuration_error",
            ReportError::Validation(_) => "validation_error",
            ReportError::UnknownClass(_) | ReportError::Annotations(_) => "annotation_error",
            ReportError::UnknownSnippet(_) => "snippet_not_found",
            ReportError::EmptySession => "empty_session",
            ReportError::NotEncoded => "not_encoded",
            ReportError::Reasoner(ReasonerError::Cycle(_)) => "subclass_cycle",
            ReportError::Reasoner(ReasonerError::UnknownClass(_)) => "unknown_class",
            ReportError::Syntax(SyntaxError::UnknownFormat(_)) => "unknown_format",
            ReportError::Syntax(_) => "serialization_error",
            ReportError::Fetch(e) if e.is_parse_error() => "ontology_parse_failed",
            ReportError::Fetch(FetchError::OfflineMiss { .. }) => "offline_cache_miss",
            ReportError::Fetch(_) => "ontology_fetch_failed",
            ReportError::Io { .. } => "io_error",
        }
    }
}
