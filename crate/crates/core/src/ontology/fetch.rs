use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::rdf::vocab::owl;
use crate::rdf::{Graph, Term};
use crate::syntax::{self, ExportFormat, ParseDiagnostic, SyntaxError};

pub const OFFLINE_ENV: &str = "MCFORGE_OFFLINE";
pub const MAX_IMPORT_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Origin {
    Url(String),
    LocalPath(PathBuf),
}

impl Origin {
    /// `http(s)://` values are URLs, `file:` IRIs and everything else are
    /// filesystem paths.
    pub fn parse(value: &str) -> Origin {
        let lower = value.to_ascii_lowercase();
        if lower.starts_with("http://") || lower.starts_with("https://") {
            return Origin::Url(value.to_owned());
        }
        if lower.starts_with("file:") {
            if let Some(path) = url::Url::parse(value).ok().and_then(|u| u.to_file_path().ok()) {
                return Origin::LocalPath(path);
            }
        }
        Origin::LocalPath(PathBuf::from(value))
    }

    /// Relative paths are resolved against `dir`.
    pub fn relative_to(self, dir: &Path) -> Origin {
        match self {
            Origin::LocalPath(p) if p.is_relative() => Origin::LocalPath(dir.join(p)),
            other => other,
        }
    }

    fn cache_key(&self) -> String {
        let text = match self {
            Origin::Url(u) => u.clone(),
            Origin::LocalPath(p) => {
                let abs = fs::canonicalize(p).unwrap_or_else(|_| p.clone());
                format!("file:{}", abs.display())
            }
        };
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn base_iri(&self) -> Option<String> {
        match self {
            Origin::Url(u) => Some(u.clone()),
            Origin::LocalPath(p) => {
                let abs = fs::canonicalize(p).ok()?;
                url::Url::from_file_path(abs).ok().map(String::from)
            }
        }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Url(u) => f.write_str(u),
            Origin::LocalPath(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OntologyHandle {
    pub origin: Origin,
    pub fetched_at: DateTime<Utc>,
    pub cache_path: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CacheMeta {
    origin: Origin,
    fetched_at: DateTime<Utc>,
    content_sha256: String,
}

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("offline mode: {origin} is not cached in {cache_dir}")]
    OfflineMiss { origin: String, cache_dir: PathBuf },
    #[error("could not fetch {origin}: {message}")]
    Network { origin: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin} is not a parsable ontology:\n{}", render(.diagnostics))]
    Parse {
        origin: String,
        diagnostics: Vec<ParseDiagnostic>,
    },
}

fn render(diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

impl FetchError {
    /// True for failures of the payload itself rather than of retrieval.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FetchError::Parse { .. })
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> FetchError + '_ {
    move |source| FetchError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub cache_dir: PathBuf,
    pub offline: bool,
}

impl FetchOptions {
    pub fn new(cache_dir: impl Into<PathBuf>, offline: bool) -> Self {
        FetchOptions {
            cache_dir: cache_dir.into(),
            offline,
        }
    }

    /// Offline mode requested here or through the environment.
    pub fn is_offline(&self) -> bool {
        self.offline || std::env::var(OFFLINE_ENV).is_ok_and(|v| v == "1")
    }
}

/// Retrieves and parses one ontology document, caching it under
/// `<cache_dir>/<sha256 of origin>.ttl`.
pub fn fetch_ontology(origin: &Origin, opts: &FetchOptions) -> Result<(OntologyHandle, Graph), FetchError> {
    let key = origin.cache_key();
    let cache_path = opts.cache_dir.join(format!("{key}.ttl"));
    let meta_path = opts.cache_dir.join(format!("{key}.json"));

    let payload = match origin {
        Origin::LocalPath(path) => fs::read_to_string(path).map_err(io_error(path))?,
        Origin::Url(url) if opts.is_offline() => {
            return read_cache(origin, &cache_path, &meta_path)?.ok_or_else(|| FetchError::OfflineMiss {
                origin: url.clone(),
                cache_dir: opts.cache_dir.clone(),
            });
        }
        Origin::Url(url) => match http_get(url) {
            Ok(body) => body,
            Err(message) => {
                if let Some(hit) = read_cache(origin, &cache_path, &meta_path)? {
                    tracing::warn!(%url, %message, "fetch failed, using cached copy");
                    return Ok(hit);
                }
                return Err(FetchError::Network {
                    origin: url.clone(),
                    message,
                });
            }
        },
    };

    let graph = parse_payload(&payload, origin)?;
    let turtle = syntax::serialize(&graph, ExportFormat::Turtle).expect("Turtle output is infallible");
    let fetched_at = Utc::now();
    let meta = CacheMeta {
        origin: origin.clone(),
        fetched_at,
        content_sha256: hex::encode(Sha256::digest(turtle.as_bytes())),
    };
    fs::create_dir_all(&opts.cache_dir).map_err(io_error(&opts.cache_dir))?;
    write_atomic(&cache_path, turtle.as_bytes())?;
    write_atomic(&meta_path, &serde_json::to_vec_pretty(&meta).expect("metadata serializes"))?;
    Ok((
        OntologyHandle {
            origin: origin.clone(),
            fetched_at,
            cache_path,
        },
        graph,
    ))
}

fn read_cache(origin: &Origin, cache_path: &Path, meta_path: &Path) -> Result<Option<(OntologyHandle, Graph)>, FetchError> {
    let text = match fs::read_to_string(cache_path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_error(cache_path)(e)),
    };
    let fetched_at = fs::read(meta_path)
        .ok()
        .and_then(|bytes| serde_json::from_slice::<CacheMeta>(&bytes).ok())
        .map_or_else(Utc::now, |m| m.fetched_at);
    let graph = syntax::parse_turtle(&text, None).map_err(|diagnostics| FetchError::Parse {
        origin: cache_path.display().to_string(),
        diagnostics,
    })?;
    Ok(Some((
        OntologyHandle {
            origin: origin.clone(),
            fetched_at,
            cache_path: cache_path.to_owned(),
        },
        graph,
    )))
}

fn http_get(url: &str) -> Result<String, String> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(30)))
        .build()
        .into();
    let mut response = agent
        .get(url)
        .header("Accept", "text/turtle, application/rdf+xml;q=0.9, */*;q=0.1")
        .call()
        .map_err(|e| e.to_string())?;
    response.body_mut().read_to_string().map_err(|e| e.to_string())
}

fn looks_like_xml(payload: &str) -> bool {
    let head = payload.trim_start_matches('\u{feff}').trim_start();
    head.starts_with("<?xml") || head.starts_with("<rdf:RDF") || head.starts_with("<!DOCTYPE")
}

fn parse_payload(payload: &str, origin: &Origin) -> Result<Graph, FetchError> {
    let base = origin.base_iri();
    if looks_like_xml(payload) {
        return syntax::parse_rdf_xml(payload, base.as_deref()).map_err(|e| FetchError::Parse {
            origin: origin.to_string(),
            diagnostics: match e {
                SyntaxError::Parse(d) => d,
                other => vec![ParseDiagnostic::error(1, 1, other.to_string())],
            },
        });
    }
    syntax::parse_turtle(payload, base.as_deref()).map_err(|diagnostics| FetchError::Parse {
        origin: origin.to_string(),
        diagnostics,
    })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), FetchError> {
    let tmp = path.with_extension(format!("tmp{}-{:016x}", std::process::id(), rand::random::<u64>()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_error(path))
}

/// An ontology together with everything it imports.
#[derive(Debug, Clone)]
pub struct LoadedOntology {
    pub handle: OntologyHandle,
    pub graph: Graph,
    pub imported: Vec<OntologyHandle>,
    pub warnings: Vec<String>,
}

/// Fetches `origin` and resolves its `owl:imports` recursively. Import
/// failures and cycles become warnings; only the root document is required.
pub fn load_ontology(origin: &Origin, opts: &FetchOptions) -> Result<LoadedOntology, FetchError> {
    let (handle, graph) = fetch_ontology(origin, opts)?;
    let mut loaded = LoadedOntology {
        handle,
        graph,
        imported: Vec::new(),
        warnings: Vec::new(),
    };
    let visit_key = |o: &Origin| o.base_iri().unwrap_or_else(|| o.to_string());
    let mut visited = BTreeSet::from([visit_key(origin)]);
    let mut queue: Vec<(String, usize)> = import_targets(&loaded.graph).into_iter().map(|t| (t, 1)).collect();
    queue.reverse();
    while let Some((target, depth)) = queue.pop() {
        let target_origin = Origin::parse(&target);
        if !visited.insert(visit_key(&target_origin)) {
            continue;
        }
        if depth > MAX_IMPORT_DEPTH {
            loaded
                .warnings
                .push(format!("import {target} skipped: nesting deeper than {MAX_IMPORT_DEPTH}"));
            continue;
        }
        match fetch_ontology(&target_origin, opts) {
            Ok((handle, graph)) => {
                let mut nested: Vec<_> = import_targets(&graph).into_iter().map(|t| (t, depth + 1)).collect();
                nested.reverse();
                queue.extend(nested);
                loaded.graph.merge(&graph);
                loaded.imported.push(handle);
            }
            Err(e) => loaded.warnings.push(format!("import {target} skipped: {e}")),
        }
    }
    Ok(loaded)
}

fn import_targets(graph: &Graph) -> Vec<String> {
    graph
        .iter()
        .filter(|t| t.predicate().as_str() == owl::IMPORTS)
        .filter_map(|t| match t.object() {
            Term::Iri(iri) => Some(iri.as_str().to_owned()),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_parsing() {
        assert_eq!(Origin::parse("https://x/o.ttl"), Origin::Url("https://x/o.ttl".into()));
        assert_eq!(Origin::parse("a/b.ttl"), Origin::LocalPath("a/b.ttl".into()));
        assert_eq!(Origin::parse("file:///tmp/o.ttl"), Origin::LocalPath("/tmp/o.ttl".into()));
        assert_eq!(
            Origin::parse("o.ttl").relative_to(Path::new("/data")),
            Origin::LocalPath("/data/o.ttl".into())
        );
    }

    #[test]
    fn xml_sniffing() {
        assert!(looks_like_xml("\u{feff}  <?xml version=\"1.0\"?>"));
        assert!(looks_like_xml("<rdf:RDF xmlns:rdf=\"x\"/>"));
        assert!(!looks_like_xml("@prefix : <http://x/> ."));
    }
}
