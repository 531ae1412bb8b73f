mod common;

use std::time::Duration;

use axum::http::StatusCode;
use serde_json::json;

use mcforge::config::Config;
use mcforge::rdf::isomorphic;
use mcforge::syntax::{reparse_any, ExportFormat};

use common::api::{app, app_with, call, create, scripted_flow};
use common::{fixture_path, MCRO, THREE_SNIPPETS};

const BASE: &str = "http://example.org/cards/api";

#[tokio::test]
async fn create_session_reports_root() {
    let app = app();
    let reply = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({ "ontology": fixture_path("mini-mcro.ttl"), "baseIri": BASE })),
    )
    .await;
    assert_eq!(reply.status, StatusCode::CREATED);
    let body = reply.json();
    assert_eq!(body["token"].as_str().unwrap().len(), 32);
    assert_eq!(body["rootClass"], format!("{MCRO}ModelCardReport"));
    assert_eq!(body["reportIri"], format!("{BASE}/report"));
    assert_eq!(body["warnings"], json!([]));
}

#[tokio::test]
async fn tokens_are_distinct() {
    let app = app();
    let a = create(&app, BASE).await;
    let b = create(&app, BASE).await;
    assert_ne!(a, b);
}

#[tokio::test]
async fn categories_and_classes() {
    let app = app();
    let token = create(&app, BASE).await;
    let reply = call(&app, "GET", &format!("/sessions/{token}/categories"), None).await;
    assert_eq!(reply.status, StatusCode::OK);
    let iris: Vec<String> = reply.json().as_array().unwrap().iter().map(|c| c["iri"].as_str().unwrap().to_owned()).collect();
    let locals: Vec<&str> = iris.iter().map(|i| i.strip_prefix(MCRO).unwrap()).collect();
    assert_eq!(locals, ["ModelCardReport", "Algorithm", "DocumentPart", "License", "ModelCardSection"]);
    let first = &reply.json()[0];
    assert_eq!(first["label"], "model card report");
    assert!(first["comment"].is_string());

    let uri = format!("/sessions/{token}/classes?category=mcro:ModelCardSection");
    let reply = call(&app, "GET", &uri, None).await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.json().as_array().unwrap().len(), 4);
    let intended = reply
        .json()
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["iri"] == format!("{MCRO}IntendedUseSection"))
        .cloned()
        .unwrap();
    assert_eq!(intended["comment"], "Primary intended uses of the model.");

    let uri = format!("/sessions/{token}/classes?category={}", urlencode(&format!("{MCRO}License")));
    let reply = call(&app, "GET", &uri, None).await;
    assert_eq!(reply.json(), json!([]));

    let reply = call(&app, "GET", &format!("/sessions/{token}/classes"), None).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let reply = call(&app, "GET", &format!("/sessions/{token}/classes?category=mcro:Nope"), None).await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
    assert_eq!(reply.json()["code"], "unknown_class");
}

fn urlencode(s: &str) -> String {
    url::form_urlencoded::byte_serialize(s.as_bytes()).collect()
}

#[tokio::test]
async fn snippet_lifecycle() {
    let app = app();
    let token = create(&app, BASE).await;
    let snippets = format!("/sessions/{token}/snippets");
    for (i, (text, class)) in THREE_SNIPPETS.iter().enumerate() {
        let reply = call(&app, "POST", &snippets, Some(json!({ "text": text, "class": class }))).await;
        assert_eq!(reply.status, StatusCode::CREATED);
        assert_eq!(reply.json()["id"], format!("s{}", i + 1));
    }
    let rows = call(&app, "GET", &snippets, None).await.json();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[1]["classIri"], format!("{MCRO}LimitationSection"));
    assert_eq!(rows[1]["classLabel"], "limitation section");

    let reply = call(&app, "DELETE", &format!("{snippets}/s2"), None).await;
    assert_eq!(reply.status, StatusCode::NO_CONTENT);
    let reply = call(&app, "DELETE", &format!("{snippets}/s2"), None).await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
    let rows = call(&app, "GET", &snippets, None).await.json();
    let ids: Vec<_> = rows.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap().to_owned()).collect();
    assert_eq!(ids, ["s1", "s3"]);

    let reply = call(&app, "POST", &snippets, Some(json!({ "text": "x", "class": "mcro:Nope" }))).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert_eq!(reply.json()["code"], "annotation_error");
    let reply = call(&app, "POST", &snippets, Some(json!({ "text": " ", "class": "mcro:License" }))).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let reply = call(&app, "POST", &snippets, Some(json!({ "text": "x" }))).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert!(reply.json()["message"].is_string());
}

#[tokio::test]
async fn encode_summary() {
    let app = app();
    let token = create(&app, BASE).await;
    let snippets = format!("/sessions/{token}/snippets");
    call(&app, "POST", &snippets, Some(json!({ "text": "Limits.", "class": "mcro:LimitationSection" }))).await;
    call(&app, "POST", &snippets, Some(json!({ "text": "Appendix.", "class": "mcro:DocumentPart" }))).await;
    let reply = call(&app, "POST", &format!("/sessions/{token}/encode"), None).await;
    assert_eq!(reply.status, StatusCode::OK);
    let body = reply.json();
    assert_eq!(body["pairs"].as_array().unwrap().len(), 1);
    assert_eq!(body["pairs"][0]["parent"], format!("{BASE}/report"));
    assert_eq!(body["pairs"][0]["child"], format!("{BASE}/s1"));
    assert_eq!(body["orphans"], json!(["s2"]));
    assert_eq!(body["warnings"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let reply = call(&app, "GET", "/sessions/deadbeef/snippets", None).await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
    assert_eq!(reply.json()["code"], "session_not_found");

    let token = create(&app, BASE).await;
    let reply = call(&app, "POST", &format!("/sessions/{token}/encode"), None).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert_eq!(reply.json()["code"], "empty_session");

    call(
        &app,
        "POST",
        &format!("/sessions/{token}/snippets"),
        Some(json!({ "text": "x", "class": "mcro:License" })),
    )
    .await;
    let reply = call(&app, "GET", &format!("/sessions/{token}/export?format=turtle"), None).await;
    assert_eq!(reply.status, StatusCode::CONFLICT);
    assert_eq!(reply.json()["code"], "not_encoded");

    call(&app, "POST", &format!("/sessions/{token}/encode"), None).await;
    let reply = call(&app, "GET", &format!("/sessions/{token}/export?format=yaml"), None).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let body = reply.json();
    assert_eq!(body["code"], "unknown_format");
    assert_eq!(body["details"]["validFormats"], json!(["turtle", "rdf", "owl", "json"]));
    for token in ["turtle", "rdf", "owl", "json"] {
        assert!(body["message"].as_str().unwrap().contains(token));
    }

    let reply = call(&app, "POST", "/sessions", Some(json!({ "ontology": "http://example.invalid/o.ttl" }))).await;
    assert_eq!(reply.status, StatusCode::BAD_GATEWAY);
    assert_eq!(reply.json()["code"], "offline_cache_miss");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    std::fs::write(&bad, "@prefix : <http://x/> .\n:a :b").unwrap();
    let reply = call(&app, "POST", "/sessions", Some(json!({ "ontology": bad }))).await;
    assert_eq!(reply.status, StatusCode::BAD_GATEWAY);
    assert_eq!(reply.json()["code"], "ontology_parse_failed");

    let reply = call(&app, "POST", "/sessions", Some(json!({ "nope": 1 }))).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert!(reply.json()["code"].is_string() && reply.json()["message"].is_string());
}

#[tokio::test]
async fn export_media_types() {
    let app = app();
    let token = create(&app, BASE).await;
    for (text, class) in THREE_SNIPPETS {
        call(&app, "POST", &format!("/sessions/{token}/snippets"), Some(json!({ "text": text, "class": class }))).await;
    }
    call(&app, "POST", &format!("/sessions/{token}/encode"), None).await;
    let mut graphs = Vec::new();
    for f in ExportFormat::ALL {
        let reply = call(&app, "GET", &format!("/sessions/{token}/export?format={}", f.token()), None).await;
        assert_eq!(reply.status, StatusCode::OK);
        assert_eq!(reply.content_type.as_deref(), Some(f.media_type()));
        assert_eq!(
            reply.disposition.as_deref(),
            Some(format!("attachment; filename=\"model-card.{}\"", f.extension()).as_str())
        );
        graphs.push(reparse_any(&reply.text(), f).unwrap());
    }
    for g in &graphs[1..] {
        assert!(isomorphic(&graphs[0], g).unwrap());
    }
}

#[tokio::test]
async fn restart_invalidates_tokens() {
    let first = app();
    let token = create(&first, BASE).await;
    assert_eq!(call(&first, "GET", &format!("/sessions/{token}/snippets"), None).await.status, StatusCode::OK);
    let restarted = app();
    let reply = call(&restarted, "GET", &format!("/sessions/{token}/snippets"), None).await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_expire() {
    let config = Config {
        session_ttl: Duration::from_millis(50),
        cache_dir: tempfile::tempdir().unwrap().keep(),
        ..Config::default()
    };
    let app = app_with(config, true);
    let token = create(&app, BASE).await;
    tokio::time::sleep(Duration::from_millis(120)).await;
    let reply = call(&app, "GET", &format!("/sessions/{token}/snippets"), None).await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn concurrent_sessions_are_independent() {
    let app = app();
    let flows: Vec<_> = (0..4)
        .map(|i| {
            let app = app.clone();
            tokio::spawn(async move { scripted_flow(&app, &format!("{BASE}/{i}"), "turtle").await })
        })
        .collect();
    for (i, flow) in flows.into_iter().enumerate() {
        let reply = flow.await.unwrap();
        assert_eq!(reply.status, StatusCode::OK);
        assert!(reply.text().contains(&format!("{BASE}/{i}/")));
    }
}
