//! Integration tests for the `crn` binary: exit-code partition, report
//! determinism, JSON schemas, and corpus fixture consistency.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn crn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crn"))
        .args(args)
        .env_remove("CRN_SEED")
        .output()
        .expect("binary runs")
}

fn corpus_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.crn"))
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

// ---------------------------------------------------------------------------
// Exit-code partition
// ---------------------------------------------------------------------------

#[test]
fn classify_applies_exits_zero() {
    let out = crn(&["classify", corpus_path("competitive_binding").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn classify_three_body_applies() {
    let out =
        crn(&["classify", corpus_path("three_body").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["theorem_applies"], serde_json::json!(true));
    assert_eq!(v["report"]["factorization"]["n_class"], serde_json::json!("STranspose"));
}

#[test]
fn classify_catalytic_network_exits_one() {
    let f = write_temp("R1: A + B -> A + C\nR2: C -> B\n");
    let out = crn(&["classify", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["non_catalytic"], serde_json::json!(false));
    assert_eq!(v["report"]["theorem_applies"], serde_json::json!(false));
}

#[test]
fn parse_error_exits_two() {
    let f = write_temp("R1: A + <-> B\n");
    let out = crn(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_exits_two() {
    let out = crn(&["classify", "/nonexistent/net.crn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_cap_exits_three() {
    // 13 isolated conversions force a cross-polytope cone of span dimension
    // 13, above the documented span-dimension cap of 12
    let mut src = String::new();
    for i in 0..13 {
        src.push_str(&format!("R{i}: A{i} <-> B{i}\n"));
    }
    let f = write_temp(&src);
    let out = crn(&["cone", f.path().to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

// ---------------------------------------------------------------------------
// Factorize schema and outcomes
// ---------------------------------------------------------------------------

#[test]
fn factorize_json_schema() {
    let out = crn(&["factorize", corpus_path("competitive_binding").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["factorizable"], serde_json::json!(true));
    assert!(v["stage"].is_null());
    assert_eq!(v["N"], serde_json::json!([["-1", "-1"], ["1", "0"], ["0", "1"]]));
    assert_eq!(v["D"], serde_json::json!(["1", "1"]));
}

#[test]
fn factorize_rejection_reports_stage() {
    // Γ = [[1,2],[2,1]]: one equivalence class of rank 2
    let f = write_temp("R1: X -> Y\nR2: 2 X -> Y\n");
    // build via explicit coefficients: X: -1,-2 / Y: 1,1 — rows not
    // equivalent; use a JSON-free direct matrix instead
    drop(f);
    let f = write_temp("R1: 2 B -> A\nR2: B -> 2 A\n");
    // Γ = [[1,2],[-2,-1]] — same support, sign products equal, rank 2
    let out = crn(&["factorize", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["factorizable"], serde_json::json!(false));
    assert_eq!(v["stage"], serde_json::json!("RankWithinClass"));
    assert!(v["P"].is_null() && v["N"].is_null() && v["D"].is_null());
}

// ---------------------------------------------------------------------------
// Determinism
// ---------------------------------------------------------------------------

#[test]
fn verify_reports_are_byte_identical_across_runs() {
    let path = corpus_path("competitive_binding");
    let args = [
        "verify",
        path.to_str().unwrap(),
        "--seed",
        "7",
        "--states",
        "10",
        "--pairs",
        "2",
        "--t-final",
        "5",
        "--dt",
        "0.01",
        "--json",
    ];
    let a = crn(&args);
    let b = crn(&args);
    // the short horizon keeps this test fast; the verdict itself is covered
    // elsewhere, here only reproducibility is under test
    assert!(matches!(a.status.code(), Some(0) | Some(1)));
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout, "verify JSON must be byte-identical given a seed");
}

#[test]
fn classify_reports_are_byte_identical_across_runs() {
    let path = corpus_path("rkip");
    let a = crn(&["classify", path.to_str().unwrap(), "--json"]);
    let b = crn(&["classify", path.to_str().unwrap(), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn crn_seed_env_sets_default_seed() {
    let path = corpus_path("competitive_binding");
    let run = |seed_env: &str| {
        Command::new(env!("CARGO_BIN_EXE_crn"))
            .args([
                "verify",
                path.to_str().unwrap(),
                "--states",
                "5",
                "--pairs",
                "1",
                "--t-final",
                "2",
                "--dt",
                "0.01",
                "--json",
            ])
            .env("CRN_SEED", seed_env)
            .output()
            .unwrap()
    };
    let a = run("3");
    let b = run("3");
    let c = crn(&[
        "verify",
        path.to_str().unwrap(),
        "--seed",
        "3",
        "--states",
        "5",
        "--pairs",
        "1",
        "--t-final",
        "2",
        "--dt",
        "0.01",
        "--json",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout, "CRN_SEED must act exactly like --seed");
}

// ---------------------------------------------------------------------------
// Corpus fixtures
// ---------------------------------------------------------------------------

#[test]
fn bundled_fixtures_match_the_library_corpus() {
    for (name, src) in crn_core::corpus::corpus_sources() {
        let path = corpus_path(name);
        let on_disk = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, src, "fixture {name} differs from the library corpus");
    }
}

#[test]
fn corpus_single_network_run() {
    let out = crn(&["corpus", "--network", "competitive_binding", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("competitive_binding"));
    assert!(text.contains("verified"));
}

#[test]
fn corpus_unknown_network_exits_two() {
    let out = crn(&["corpus", "--network", "no_such_network"]);
    assert_eq!(out.status.code(), Some(2));
}

// ---------------------------------------------------------------------------
// Other commands
// ---------------------------------------------------------------------------

#[test]
fn parse_round_trip_is_stable() {
    let path = corpus_path("rkip");
    let once = crn(&["parse", path.to_str().unwrap()]);
    assert_eq!(once.status.code(), Some(0));
    let f = write_temp(&String::from_utf8(once.stdout.clone()).unwrap());
    let twice = crn(&["parse", f.path().to_str().unwrap()]);
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn graph_outputs_ri_adjacency_and_dot() {
    let path = corpus_path("competitive_binding");
    let out = crn(&["graph", path.to_str().unwrap(), "--kind", "ri"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["strongly_connected"], serde_json::json!(true));
    assert_eq!(v["adj"], serde_json::json!([[1], [0]]));
    let dot = crn(&["graph", path.to_str().unwrap(), "--kind", "bipartite", "--dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"X\" -> \"R1\""));
}

#[test]
fn cone_emits_rational_generators_and_ball() {
    let path = corpus_path("competitive_binding");
    let out = crn(&["cone", path.to_str().unwrap(), "--emit-ball"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["family"], serde_json::json!("simplex"));
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["ball"]["dim"], serde_json::json!(2));
    // hexagonal ball: 6 extreme points of H
    assert_eq!(v["ball"]["h_points"].as_array().unwrap().len(), 6);
}

#[test]
fn simulate_emits_csv_with_header() {
    let path = corpus_path("competitive_binding");
    let out = crn(&[
        "simulate",
        path.to_str().unwrap(),
        "--x0",
        "1,1,0.5,0.2,0.1",
        "--t-final",
        "1",
        "--points",
        "4",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,X,E1,XE1,E2,XE2");
    assert_eq!(lines.count(), 5); // t = 0 plus 4 checkpoints
}

#[test]
fn simulate_rejects_wrong_x0_length() {
    let path = corpus_path("competitive_binding");
    let out = crn(&["simulate", path.to_str().unwrap(), "--x0", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}
