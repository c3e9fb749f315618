use std::path::Path;
use std::process::{Command, Output};

fn lectern(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lectern")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn missing_input_exits_with_two_and_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = lectern(dir.path(), &["edit", "--scenario", "missing.json", "--out", "edl.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("missing.json"), "{err}");
    assert!(!dir.path().join("edl.json").exists());
}

#[test]
fn unknown_subcommand_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lectern(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(lectern(d, &["simulate", "--suite", "--seed", "1", "--out", "suite"]).status.success());
    assert!(lectern(d, &["default-config", "--out", "cfg.json"]).status.success());
    let mut cfg: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("cfg.json")).unwrap()).unwrap();
    cfg["l_min"] = 50.0.into();
    cfg["l_max"] = 10.0.into();
    std::fs::write(d.join("cfg.json"), cfg.to_string()).unwrap();
    let out = lectern(d, &["edit", "--scenario", "suite/scenario_00.json", "--config", "cfg.json", "--out", "e.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l_"));
}

#[test]
fn edit_writes_edl_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(lectern(d, &["simulate", "--suite", "--seed", "2", "--out", "suite"]).status.success());
    let out = lectern(d, &["edit", "--scenario", "suite/scenario_03.json", "--mode", "offline", "--out", "e.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("total_reward "));
    let edl: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("e.json")).unwrap()).unwrap();
    assert!(edl["segments"].as_array().is_some_and(|s| !s.is_empty()));
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("e.json.manifest.json")).unwrap()).unwrap();
    assert!(manifest.get("timings_s").is_none());
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
}

#[test]
fn record_timings_adds_timings() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(lectern(d, &["--record-timings", "default-config", "--out", "c.json"]).status.success());
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("c.json.manifest.json")).unwrap()).unwrap();
    assert!(manifest.get("timings_s").is_some());
}
