//! HTTP API over in-memory report sessions.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex as StdMutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::config::Config;
use crate::ontology::{extract, load_ontology, FetchError, FetchOptions, Origin};
use crate::report::{open_session, LinkedPair, ReportError, ReportSession, SessionConfig};
use crate::syntax::{ExportFormat, SyntaxError};

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.to_owned(),
            message: message.into(),
            details: None,
        }
    }

    fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "validation_error", message)
    }

    fn unknown_session() -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "session_not_found", "unknown or expired session token")
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<ReportError> for ApiError {
    fn from(e: ReportError) -> Self {
        let status = match &e {
            ReportError::UnknownSnippet(_) => StatusCode::NOT_FOUND,
            ReportError::NotEncoded => StatusCode::CONFLICT,
            ReportError::Fetch(_) => StatusCode::BAD_GATEWAY,
            ReportError::Io { .. } | ReportError::Syntax(SyntaxError::UnrepresentableXml(_)) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
            ReportError::Syntax(SyntaxError::UnsplittablePredicate(_)) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        let details = match &e {
            ReportError::Annotations(issues) => Some(json!(issues)),
            _ => None,
        };
        ApiError {
            status,
            code: e.code().to_owned(),
            message: e.to_string(),
            details,
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Entry {
    session: Arc<Mutex<ReportSession>>,
    created_at: Instant,
}

/// Live sessions keyed by random 128-bit tokens. Entries older than the TTL
/// are dropped on access.
pub struct SessionRegistry {
    sessions: StdMutex<HashMap<String, Entry>>,
    ttl: Duration,
}

impl SessionRegistry {
    pub fn new(ttl: Duration) -> Self {
        SessionRegistry {
            sessions: StdMutex::new(HashMap::new()),
            ttl,
        }
    }

    fn map(&self) -> std::sync::MutexGuard<'_, HashMap<String, Entry>> {
        let mut map = self.sessions.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
        let ttl = self.ttl;
        map.retain(|_, e| e.created_at.elapsed() < ttl);
        map
    }

    pub fn insert(&self, session: ReportSession) -> String {
        let token = format!("{:032x}", rand::random::<u128>());
        self.map().insert(
            token.clone(),
            Entry {
                session: Arc::new(Mutex::new(session)),
                created_at: Instant::now(),
            },
        );
        token
    }

    pub fn get(&self, token: &str) -> Option<Arc<Mutex<ReportSession>>> {
        self.map().get(token).map(|e| e.session.clone())
    }

    pub fn len(&self) -> usize {
        self.map().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub struct AppState {
    pub config: Config,
    pub fetch: FetchOptions,
    pub registry: SessionRegistry,
}

impl AppState {
    pub fn new(config: Config, offline: bool) -> Self {
        AppState {
            fetch: FetchOptions::new(config.cache_dir.clone(), offline),
            registry: SessionRegistry::new(config.session_ttl),
            config,
        }
    }

    fn session(&self, token: &str) -> ApiResult<Arc<Mutex<ReportSession>>> {
        self.registry.get(token).ok_or_else(ApiError::unknown_session)
    }
}

/// The API routes, plus static files from `ui_dir` for every other path.
pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let cors = cors_layer(&state.config.cors_origins);
    let mut app = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{token}/categories", get(categories))
        .route("/sessions/{token}/classes", get(classes))
        .route("/sessions/{token}/snippets", post(add_snippet).get(list_snippets))
        .route("/sessions/{token}/snippets/{id}", delete(remove_snippet))
        .route("/sessions/{token}/encode", post(encode))
        .route("/sessions/{token}/export", get(export))
        .with_state(state);
    if let Some(dir) = ui_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(cors) = cors {
        app = app.layer(cors);
    }
    app
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST, Method::DELETE])
            .allow_headers([header::CONTENT_TYPE]),
    )
}

/// Serves `app` on `addr` until Ctrl-C.
pub async fn serve(addr: SocketAddr, app: Router) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct CreateSession {
    ontology: String,
    base_iri: Option<String>,
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<Response> {
    let req: CreateSession = parse_body(&body)?;
    let origin = Origin::parse(&req.ontology);
    let fetch = state.fetch.clone();
    let loaded = tokio::task::spawn_blocking(move || load_ontology(&origin, &fetch))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal_error", e.to_string()))?
        .map_err(|e: FetchError| ApiError::from(ReportError::Fetch(e)))?;
    let model = extract(&loaded.graph);
    let mut warnings = loaded.warnings.clone();
    warnings.extend(model.warnings().iter().cloned());
    let config = SessionConfig {
        reasoner: state.config.reasoner.clone(),
        root_class: state.config.root_class.clone(),
        base_iri: req.base_iri,
    };
    let session = open_session(Arc::new(model), &config)?;
    let body = json!({
        "rootClass": session.root_class(),
        "reportIri": session.report_iri(),
        "warnings": warnings,
    });
    let mut body = body;
    body["token"] = Value::String(state.registry.insert(session));
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn categories(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let session = session.lock().await;
    Ok(Json(session.categories(&state.config.auxiliary_categories)).into_response())
}

async fn classes(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let session = session.lock().await;
    let category = query
        .get("category")
        .ok_or_else(|| ApiError::bad_request("missing query parameter \"category\""))?;
    let category = session.resolve_class(category).map_err(|e| {
        ApiError::new(StatusCode::NOT_FOUND, "unknown_class", e.to_string())
    })?;
    Ok(Json(session.classes_in(&category)?).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewSnippet {
    text: String,
    class: String,
}

async fn add_snippet(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let req: NewSnippet = parse_body(&body)?;
    let id = session.lock().await.add_snippet(&req.text, &req.class)?;
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))).into_response())
}

async fn list_snippets(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let rows = session.lock().await.list_snippets();
    Ok(Json(rows).into_response())
}

async fn remove_snippet(
    State(state): State<Arc<AppState>>,
    Path((token, id)): Path<(String, String)>,
) -> ApiResult<Response> {
    let session = state.session(&token)?;
    session.lock().await.remove_snippet(&id)?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

#[derive(Serialize)]
struct EncodeSummary {
    pairs: Vec<LinkedPair>,
    orphans: Vec<String>,
    warnings: Vec<String>,
}

async fn encode(State(state): State<Arc<AppState>>, Path(token): Path<String>) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let result = session.lock().await.encode()?;
    Ok(Json(EncodeSummary {
        pairs: result.pairs,
        orphans: result.orphans,
        warnings: result.warnings,
    })
    .into_response())
}

fn unknown_format(message: String) -> ApiError {
    let tokens: Vec<&str> = ExportFormat::ALL.iter().map(|f| f.token()).collect();
    ApiError::new(StatusCode::BAD_REQUEST, "unknown_format", message).with_details(json!({ "validFormats": tokens }))
}

async fn export(
    State(state): State<Arc<AppState>>,
    Path(token): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult<Response> {
    let session = state.session(&token)?;
    let format: ExportFormat = match query.get("format").map(|f| f.parse::<ExportFormat>()) {
        Some(Ok(format)) => format,
        Some(Err(e)) => return Err(unknown_format(e.to_string())),
        None => {
            return Err(unknown_format(format!(
                "missing query parameter \"format\"; expected one of: {}",
                ExportFormat::valid_tokens()
            )))
        }
    };
    let body = session.lock().await.export(format)?;
    Ok((
        [
            (header::CONTENT_TYPE, format.media_type().to_owned()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"model-card.{}\"", format.extension()),
            ),
        ],
        body,
    )
        .into_response())
}
