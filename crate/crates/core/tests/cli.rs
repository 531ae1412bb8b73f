mod common;

use std::path::Path;
use std::process::{Command, Output};

use mcforge::ontology::FetchOptions;
use mcforge::rdf::isomorphic;
use mcforge::report::{ingest_manifest, IngestOptions};
use mcforge::syntax::{reparse_any, ExportFormat};

use common::fixture_path;

fn mcforge(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcforge"))
        .args(args)
        .env_remove("MCFORGE_OFFLINE")
        .env("XDG_CACHE_HOME", cache)
        .output()
        .unwrap()
}

fn in_process(manifest: &Path, cache: &Path) -> mcforge::report::PublishResult {
    let opts = IngestOptions {
        fetch: Some(FetchOptions::new(cache, true)),
        ..IngestOptions::default()
    };
    ingest_manifest(manifest, &opts).unwrap().session.encode().unwrap()
}

#[test]
fn publish_matches_in_process_encode() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = fixture_path("sample-card.json");
    let expected = in_process(&manifest, dir.path());
    for f in ExportFormat::ALL {
        let out = dir.path().join(format!("card.{}", f.extension()));
        let output = mcforge(
            &["publish", "--input", manifest.to_str().unwrap(), "--format", f.token(), "--out", out.to_str().unwrap()],
            dir.path(),
        );
        assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
        let stdout = String::from_utf8_lossy(&output.stdout);
        assert!(stdout.contains("8 snippet(s), 7 link(s), 1 orphan(s)"), "{stdout}");
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(stderr.contains("s8"), "{stderr}");
        let written = reparse_any(&std::fs::read_to_string(&out).unwrap(), f).unwrap();
        assert!(isomorphic(&written, &expected.graph).unwrap(), "{f:?}");
    }
}

#[test]
fn unknown_format_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("card.xml");
    let output = mcforge(
        &[
            "publish",
            "--input",
            fixture_path("sample-card.json").to_str().unwrap(),
            "--format",
            "xml",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    for token in ["turtle", "rdf", "owl", "json"] {
        assert!(stderr.contains(token), "{stderr}");
    }
    assert!(!out.exists());
}

#[test]
fn offline_cold_cache_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("card.ttl");
    let output = mcforge(
        &[
            "publish",
            "--input",
            fixture_path("sample-card.json").to_str().unwrap(),
            "--ontology",
            "https://example.invalid/mcro.owl",
            "--offline",
            "--cache-dir",
            dir.path().join("cache").to_str().unwrap(),
            "--format",
            "turtle",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(2), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(!out.exists());
}

#[test]
fn strict_turns_warnings_into_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("card.ttl");
    let output = mcforge(
        &[
            "publish",
            "--strict",
            "--input",
            fixture_path("sample-card.json").to_str().unwrap(),
            "--format",
            "turtle",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn annotation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    std::fs::write(
        &manifest,
        serde_json::json!({
            "ontology": fixture_path("mini-mcro.ttl"),
            "snippets": [{ "text": "x", "class": "mcro:Nonexistent" }],
        })
        .to_string(),
    )
    .unwrap();
    let output = mcforge(&["validate", "--input", manifest.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("mcro:Nonexistent"));

    let output = mcforge(&["validate", "--input", dir.path().join("missing.json").to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn validate_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let output = mcforge(&["validate", "--input", fixture_path("sample-card.json").to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("8 snippet(s)"));

    let output = mcforge(&["--help"], dir.path());
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("publish"));
    assert_eq!(mcforge(&["publish", "--bogus"], dir.path()).status.code(), Some(1));
}

#[test]
fn config_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("mcforge.toml");
    std::fs::write(&config, "root_class_iri = \"http://example.org/mini-mcro#ModelCardSection\"\n").unwrap();
    let out = dir.path().join("card.nt");
    let output = mcforge(
        &[
            "--config",
            config.to_str().unwrap(),
            "publish",
            "--input",
            fixture_path("sample-card.json").to_str().unwrap(),
            "--format",
            "rdf",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let body = std::fs::read_to_string(&out).unwrap();
    assert!(body.contains(
        "<http://example.org/cards/sample/report> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/mini-mcro#ModelCardSection> ."
    ));

    std::fs::write(&config, "no_such_key = 1\n").unwrap();
    let output = mcforge(
        &["--config", config.to_str().unwrap(), "validate", "--input", fixture_path("sample-card.json").to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
}
