//! C ABI for mcforge.
//!
//! Every fallible function returns an [`McfStatus`]. On failure a message is
//! available from [`mcf_last_error_message`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`mcf_string_free`]; sessions with [`mcf_session_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::sync::Arc;

use mcforge::config::default_cache_dir;
use mcforge::ontology::{extract, load_ontology, FetchError, FetchOptions, Origin};
use mcforge::reasoner::ReasonerError;
use mcforge::report::{ingest_manifest, open_session, IngestOptions, ReportError, ReportSession, SessionConfig};
use mcforge::syntax::{parse_turtle, serialize, ExportFormat, SyntaxError};

/// Result codes shared by every function of the library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McfStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 1,
    Validation = 2,
    /// A snippet names a class the ontology does not define.
    Annotation = 3,
    SnippetNotFound = 4,
    NotEncoded = 5,
    EmptySession = 6,
    UnknownFormat = 7,
    Configuration = 8,
    SubclassCycle = 9,
    /// The ontology or input document could not be parsed.
    Parse = 10,
    OfflineCacheMiss = 11,
    Fetch = 12,
    Io = 13,
    Serialization = 14,
    Panic = 99,
}

/// Opaque report session.
pub struct McfSession {
    inner: ReportSession,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(McfStatus, String);

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure(McfStatus::InvalidArgument, message.into())
    }
}

fn fetch_status(e: &FetchError) -> McfStatus {
    match e {
        FetchError::OfflineMiss { .. } => McfStatus::OfflineCacheMiss,
        FetchError::Network { .. } => McfStatus::Fetch,
        FetchError::Io { .. } => McfStatus::Io,
        FetchError::Parse { .. } => McfStatus::Parse,
    }
}

fn syntax_status(e: &SyntaxError) -> McfStatus {
    match e {
        SyntaxError::UnknownFormat { .. } => McfStatus::UnknownFormat,
        SyntaxError::Parse(_) | SyntaxError::Unsupported(_) => McfStatus::Parse,
        _ => McfStatus::Serialization,
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        let status = match &e {
            ReportError::Configuration(_) => McfStatus::Configuration,
            ReportError::Validation(_) => McfStatus::Validation,
            ReportError::UnknownClass(_) | ReportError::Annotations(_) => McfStatus::Annotation,
            ReportError::UnknownSnippet(_) => McfStatus::SnippetNotFound,
            ReportError::EmptySession => McfStatus::EmptySession,
            ReportError::NotEncoded => McfStatus::NotEncoded,
            ReportError::Reasoner(ReasonerError::Cycle(_)) => McfStatus::SubclassCycle,
            ReportError::Reasoner(_) => McfStatus::Annotation,
            ReportError::Syntax(s) => syntax_status(s),
            ReportError::Fetch(f) => fetch_status(f),
            ReportError::Io { .. } => McfStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

impl From<FetchError> for Failure {
    fn from(e: FetchError) -> Self {
        Failure(fetch_status(&e), e.to_string())
    }
}

impl From<SyntaxError> for Failure {
    fn from(e: SyntaxError) -> Self {
        Failure(syntax_status(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> McfStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => McfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            McfStatus::Panic
        }
    }
}

unsafe fn required_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::invalid(format!("{name} must not be null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::invalid(format!("{name} is not valid UTF-8")))
}

unsafe fn optional_str<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        required_str(p, name).map(Some)
    }
}

unsafe fn session_mut<'a>(p: *mut McfSession) -> Result<&'a mut McfSession, Failure> {
    p.as_mut().ok_or_else(|| Failure::invalid("session must not be null"))
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    let c = CString::new(value).map_err(|_| Failure(McfStatus::Serialization, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn fetch_options(cache_dir: Option<&str>, offline: bool) -> FetchOptions {
    FetchOptions::new(cache_dir.map(PathBuf::from).unwrap_or_else(default_cache_dir), offline)
}

/// Opens a session on the ontology at `ontology` (URL or path).
///
/// `base_iri` and `cache_dir` may be null. On success `*out` receives a new
/// session.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_open(
    ontology: *const c_char,
    base_iri: *const c_char,
    cache_dir: *const c_char,
    offline: bool,
    out: *mut *mut McfSession,
) -> McfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::invalid("out must not be null"));
        }
        let ontology = required_str(ontology, "ontology")?;
        let base_iri = optional_str(base_iri, "base_iri")?;
        let opts = fetch_options(optional_str(cache_dir, "cache_dir")?, offline);
        let loaded = load_ontology(&Origin::parse(ontology), &opts)?;
        let config = SessionConfig {
            base_iri: base_iri.map(str::to_owned),
            ..SessionConfig::default()
        };
        let inner = open_session(Arc::new(extract(&loaded.graph)), &config)?;
        *out = Box::into_raw(Box::new(McfSession { inner }));
        Ok(())
    })
}

/// Opens a session from a snippet manifest (JSON) and loads its snippets.
///
/// # Safety
/// As for [`mcf_session_open`].
#[no_mangle]
pub unsafe extern "C" fn mcf_session_open_manifest(
    path: *const c_char,
    cache_dir: *const c_char,
    offline: bool,
    out: *mut *mut McfSession,
) -> McfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::invalid("out must not be null"));
        }
        let path = required_str(path, "path")?;
        let opts = IngestOptions {
            fetch: Some(fetch_options(optional_str(cache_dir, "cache_dir")?, offline)),
            ..IngestOptions::default()
        };
        let inner = ingest_manifest(path.as_ref(), &opts)?.session;
        *out = Box::into_raw(Box::new(McfSession { inner }));
        Ok(())
    })
}

/// Adds a snippet annotated with `class_iri` (absolute or prefixed IRI). When
/// `out_id` is not null it receives the new snippet id.
///
/// # Safety
/// `session` must come from this library; strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_add_snippet(
    session: *mut McfSession,
    text: *const c_char,
    class_iri: *const c_char,
    out_id: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let session = session_mut(session)?;
        let id = session
            .inner
            .add_snippet(required_str(text, "text")?, required_str(class_iri, "class_iri")?)?;
        if !out_id.is_null() {
            write_string(out_id, id)?;
        }
        Ok(())
    })
}

/// # Safety
/// `session` must come from this library; `id` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_remove_snippet(session: *mut McfSession, id: *const c_char) -> McfStatus {
    guard(|| {
        let session = session_mut(session)?;
        session.inner.remove_snippet(required_str(id, "id")?)?;
        Ok(())
    })
}

/// Number of snippets, or 0 for a null session.
///
/// # Safety
/// `session` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_snippet_count(session: *const McfSession) -> usize {
    session.as_ref().map_or(0, |s| s.inner.snippets().len())
}

/// Links the session's snippets. `out_pairs` and `out_orphans` may be null.
///
/// # Safety
/// `session` must come from this library; out-pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_encode(
    session: *mut McfSession,
    out_pairs: *mut usize,
    out_orphans: *mut usize,
) -> McfStatus {
    guard(|| {
        let session = session_mut(session)?;
        let result = session.inner.encode()?;
        if !out_pairs.is_null() {
            *out_pairs = result.pairs.len();
        }
        if !out_orphans.is_null() {
            *out_orphans = result.orphans.len();
        }
        Ok(())
    })
}

/// Serializes the last encode result. `format` is one of `turtle`, `rdf`,
/// `owl`, `json`.
///
/// # Safety
/// `session` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_export(
    session: *mut McfSession,
    format: *const c_char,
    out: *mut *mut c_char,
) -> McfStatus {
    guard(|| {
        let session = session_mut(session)?;
        if out.is_null() {
            return Err(Failure::invalid("out must not be null"));
        }
        let format: ExportFormat = required_str(format, "format")?.parse()?;
        write_string(out, session.inner.export(format)?)
    })
}

/// Re-serializes a Turtle document in another export format.
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mcf_convert(turtle: *const c_char, format: *const c_char, out: *mut *mut c_char) -> McfStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::invalid("out must not be null"));
        }
        let format: ExportFormat = required_str(format, "format")?.parse()?;
        let graph = parse_turtle(required_str(turtle, "turtle")?, None).map_err(SyntaxError::Parse)?;
        write_string(out, serialize(&graph, format)?)
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn mcf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed only once.
#[no_mangle]
pub unsafe extern "C" fn mcf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `session` must be null or come from this library, freed only once.
#[no_mangle]
pub unsafe extern "C" fn mcf_session_free(session: *mut McfSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mcf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
