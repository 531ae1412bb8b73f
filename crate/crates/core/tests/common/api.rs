use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use mcforge::config::Config;
use mcforge::service::{router, AppState};

pub struct Reply {
    pub status: StatusCode,
    pub content_type: Option<String>,
    pub disposition: Option<String>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.text()))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }
}

pub fn app_with(config: Config, offline: bool) -> Router {
    router(Arc::new(AppState::new(config, offline)), None)
}

pub fn app() -> Router {
    let config = Config {
        cache_dir: std::env::temp_dir().join(format!("mcforge-api-cache-{}", std::process::id())),
        ..Config::default()
    };
    app_with(config, true)
}

pub async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let (parts, body) = resp.into_parts();
    let header = |name: &str| parts.headers.get(name).map(|v| v.to_str().unwrap().to_owned());
    let (status, content_type, disposition) = (parts.status, header("content-type"), header("content-disposition"));
    let body = body.collect().await.unwrap().to_bytes().to_vec();
    Reply {
        status,
        content_type,
        disposition,
        body,
    }
}

/// Creates a session on the fixture ontology and returns its token.
pub async fn create(app: &Router, base: &str) -> String {
    let reply = call(
        app,
        "POST",
        "/sessions",
        Some(serde_json::json!({ "ontology": super::fixture_path("mini-mcro.ttl"), "baseIri": base })),
    )
    .await;
    assert_eq!(reply.status, StatusCode::CREATED, "{}", reply.text());
    reply.json()["token"].as_str().unwrap().to_owned()
}

/// create, annotate the three section snippets, encode, export.
pub async fn scripted_flow(app: &Router, base: &str, format: &str) -> Reply {
    let token = create(app, base).await;
    for (text, class) in super::THREE_SNIPPETS {
        let reply = call(
            app,
            "POST",
            &format!("/sessions/{token}/snippets"),
            Some(serde_json::json!({ "text": text, "class": class })),
        )
        .await;
        assert_eq!(reply.status, StatusCode::CREATED, "{}", reply.text());
    }
    let reply = call(app, "POST", &format!("/sessions/{token}/encode"), None).await;
    assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
    call(app, "GET", &format!("/sessions/{token}/export?format={format}"), None).await
}
