mod common;

use std::path::Path;
use std::process::Output;

use chaingauge::cli::manifest_path;

use common::{bin, ok, pipeline};

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

#[test]
fn gen_writes_graph_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--type", "er", "--n", "40", "--p", "0.5", "--seed", "1", "-o", "g.json"]);
    let g = chaingauge::ising::read_model(&dir.path().join("g.json")).unwrap();
    assert_eq!(g.n(), 40);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path(&dir.path().join("g.json"))).unwrap()).unwrap();
    assert_eq!(manifest["command"], "gen");
    assert_eq!(manifest["seeds"][0], 1);
    assert_eq!(manifest["params"]["n"], 40);
}

#[test]
fn missing_required_flags_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["tune", "--model", "m.json", "--topology", "t.json", "--embedding", "e.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--cb-lo"));
}

#[test]
fn unknown_command_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn spectral_cap_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--type", "complete", "--n", "13", "-o", "m.json"]);
    let out = run(dir.path(), &["gap", "--model", "m.json", "--points", "201", "-o", "prof.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));

    let out = bin()
        .current_dir(dir.path())
        .env("CHAINGAUGE_QUBIT_CAP", "2")
        .args(["gen", "--type", "complete", "--n", "3", "-o", "k3.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .current_dir(dir.path())
        .env("CHAINGAUGE_QUBIT_CAP", "2")
        .args(["gap", "--model", "k3.json", "--points", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["bounds", "--model", "absent.json"]).status.code(), Some(1));
}

#[test]
fn bounds_and_gap_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--type", "complete", "--n", "3", "-o", "k3.json"]);
    let out = run(dir.path(), &["bounds", "--model", "k3.json", "--method", "torque"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["magnitude"].as_f64().unwrap(), 1.414 * 2f64.sqrt());

    ok(dir.path(), &["gap", "--model", "k3.json", "--points", "11", "--levels", "3", "--rescale-check", "2", "--summary", "s.json", "-o", "p.csv"]);
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(csv.starts_with("s,E0,E1,E2\n"));
    assert_eq!(csv.lines().count(), 12);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert!(summary["degenerate"].as_bool().unwrap());
    assert!(summary["rescaling"]["max_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn invalid_embedding_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--type", "complete", "--n", "3", "-o", "k3.json"]);
    ok(dir.path(), &["topo", "chimera", "--m", "1", "-o", "t.json"]);
    std::fs::write(dir.path().join("e.json"), r#"{"phi": {"0": [0], "1": [1], "2": [2]}}"#).unwrap();
    let out = run(dir.path(), &["embed", "validate", "--model", "k3.json", "--topology", "t.json", "--embedding", "e.json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn pipelines_are_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = pipeline(a.path());
    let fb = pipeline(b.path());
    assert_eq!(fa.len(), fb.len());
    assert!(fa.len() >= 28);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{:?} differs", x.file_name());
    }
    let replay = std::fs::read_to_string(a.path().join("replay.json")).unwrap();
    assert_eq!(replay, std::fs::read_to_string(a.path().join("ss.json")).unwrap());
    let trace = std::fs::read_to_string(a.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("step,cs,chain_break_rate,lo,hi,converged\n"));
    let scan = std::fs::read_to_string(a.path().join("scan.csv")).unwrap();
    assert_eq!(scan.lines().count(), 5);
}
