use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use super::session::{open_session, ReportSession, SessionConfig};
use super::{AnnotationIssue, ReportError};
use crate::ontology::{extract, load_ontology, FetchOptions, LoadedOntology, Origin};

/// Batch input: an ontology reference plus annotated snippets.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct Manifest {
    pub ontology: String,
    pub base_iri: Option<String>,
    #[serde(default)]
    pub prefixes: BTreeMap<String, String>,
    pub snippets: Vec<ManifestSnippet>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestSnippet {
    pub id: Option<String>,
    pub text: String,
    pub class: String,
}

impl Manifest {
    pub fn parse(source: &str) -> Result<Manifest, ReportError> {
        serde_json::from_str(source).map_err(|e| ReportError::Validation(format!("manifest: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Manifest, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
            path: path.to_owned(),
            source,
        })?;
        Manifest::parse(&text)
    }

    /// Adds every snippet to `session`, collecting all failures.
    pub fn populate(&self, session: &mut ReportSession) -> Result<(), ReportError> {
        session.set_prefixes(self.prefixes.clone());
        let issues: Vec<AnnotationIssue> = self
            .snippets
            .iter()
            .enumerate()
            .filter_map(|(index, s)| {
                session
                    .add_snippet_with_id(s.id.as_deref(), &s.text, &s.class)
                    .err()
                    .map(|e| AnnotationIssue {
                        index,
                        id: s.id.clone(),
                        message: e.to_string(),
                    })
            })
            .collect();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ReportError::Annotations(issues))
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub fetch: Option<FetchOptions>,
    pub session: SessionConfig,
    /// Used instead of the manifest's `ontology` field.
    pub ontology_override: Option<String>,
}

#[derive(Debug)]
pub struct Ingested {
    pub session: ReportSession,
    pub ontology: LoadedOntology,
}

/// Loads the manifest at `path`, its ontology, and a session holding its
/// snippets. Relative ontology paths are resolved against the manifest's
/// directory; a base IRI in `opts` wins over the manifest's.
pub fn ingest_manifest(path: &Path, opts: &IngestOptions) -> Result<Ingested, ReportError> {
    let manifest = Manifest::from_path(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let origin = match &opts.ontology_override {
        Some(o) => Origin::parse(o),
        None => Origin::parse(&manifest.ontology).relative_to(&dir),
    };
    let fetch = opts
        .fetch
        .clone()
        .unwrap_or_else(|| FetchOptions::new(crate::config::default_cache_dir(), false));
    let ontology = load_ontology(&origin, &fetch)?;
    let model = Arc::new(extract(&ontology.graph));
    let mut config = opts.session.clone();
    if config.base_iri.is_none() {
        config.base_iri = manifest.base_iri.clone();
    }
    let mut session = open_session(model, &config)?;
    manifest.populate(&mut session)?;
    Ok(Ingested { session, ontology })
}
