use std::process::Command;

use double_cluster::harness::{run, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};
use serde_json::Value;

fn cli(args: &str) -> (i32, Value, String) {
    let mut argv = vec!["double-cluster".to_string()];
    argv.extend(args.split_whitespace().map(String::from));
    let out = run(argv);
    let json = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, json, out.stderr)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn log_canonical_double_and_dual_pass() {
    let (code, r, _) = cli("verify log-canonical --n 2 --points 5 --seed 1 --bracket double");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "pass");
    assert!(r["checks"][0]["detail"]["omega"]["labels"].is_array());
    let (code, _, _) = cli("verify log-canonical --n 3 --points 5 --seed 1 --bracket dual");
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn corrupted_family_is_caught_with_a_named_pair() {
    let (code, r, stderr) = cli("verify log-canonical --n 3 --points 3 --seed 1 --corrupt");
    assert_eq!(code, EXIT_VIOLATION);
    let pair = r["checks"][0]["detail"]["pair"].as_array().unwrap();
    assert!(pair.iter().any(|p| p == "phi_1_1+g_1_1"));
    assert!(stderr.contains("FAIL"));
}

#[test]
fn same_seed_same_report() {
    let a = cli("verify log-canonical --n 3 --points 3 --seed 9").1;
    let b = cli("verify log-canonical --n 3 --points 3 --seed 9").1;
    assert_eq!(without_timing(a), without_timing(b));
    let c = cli("mutate --n 2 --at g22 --points 3 --seed 4 --check-regularity --trials 3").1;
    let d = cli("mutate --n 2 --at g22 --points 3 --seed 4 --check-regularity --trials 3").1;
    assert_eq!(without_timing(c), without_timing(d));
}

#[test]
fn rationals_are_strings() {
    let (_, r, _) = cli("verify identity --n 3 --trials 2 --seed 5");
    let lhs = &r["checks"][0]["detail"]["lhs"];
    assert!(lhs.is_string());
}

#[test]
fn identity_and_corollary() {
    for n in 2..=6 {
        let (code, r, _) = cli(&format!("verify identity --n {n} --trials 10 --seed 2"));
        assert_eq!(code, EXIT_PASS, "identity n = {n}");
        assert_eq!(r["checks"].as_array().unwrap().len(), 10);
    }
    let (code, r, _) = cli("verify corollary --n 3 --trials 4 --seed 1 --divisibility-trials 3");
    assert_eq!(code, EXIT_PASS);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"corollary/divisibility"));
    let (code, _, stderr) = cli("verify corollary --n 2 --trials 4 --seed 1");
    assert_eq!(code, EXIT_USAGE);
    assert!(stderr.contains("n > 2"));
}

#[test]
fn casimirs_including_edge_cases() {
    for n in 2..=4 {
        assert_eq!(cli(&format!("verify casimirs --n {n} --points 2 --seed 3")).0, EXIT_PASS);
    }
    assert_eq!(cli("verify casimirs --n 3 --points 2 --seed 3 --bracket std").0, EXIT_PASS);
    let (code, r, _) = cli("verify casimirs --n 2 --points 2 --seed 3 --functions c_1");
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["checks"][0]["detail"]["brackets_checked"], 2);
}

#[test]
fn mutation_round_trips_restore_values() {
    let (code, r, _) = cli("mutate --n 2 --sequence g22,g22 --points 3 --seed 1");
    assert_eq!(code, EXIT_PASS);
    let restored = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "values/equal-to-initial").unwrap();
    assert_eq!(restored["detail"]["equal"], true);
    let (_, r, _) = cli("mutate --n 3 --sequence h22,h22 --points 3 --seed 1");
    let restored = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "values/equal-to-initial").unwrap();
    assert_eq!(restored["detail"]["equal"], true);
}

#[test]
fn special_mutation_is_regular() {
    let (code, r, _) = cli("mutate --n 3 --at phi11 --check-regularity --points 3 --seed 1 --trials 5");
    assert_eq!(code, EXIT_PASS);
    let checks = r["checks"].as_array().unwrap();
    let div = checks.iter().find(|c| c["name"] == "regularity/00-divisibility").unwrap();
    assert_eq!(div["status"], "evidence");
}

#[test]
fn usage_errors() {
    assert_eq!(cli("verify log-canonical --n 1").0, EXIT_USAGE);
    assert_eq!(cli("verify log-canonical --n 3 --points 1").0, EXIT_USAGE);
    assert_eq!(cli("verify log-canonical --n 3 --bracket sideways").0, EXIT_USAGE);
    assert_eq!(cli("mutate --n 3 --at g_1_1").0, EXIT_USAGE);
    assert_eq!(cli("mutate --n 3 --at nonsense").0, EXIT_USAGE);
    assert_eq!(cli("mutate --n 3").0, EXIT_USAGE);
    assert_eq!(cli("frobnicate").0, EXIT_USAGE);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 3, "points": 3, "seed": 4, "bracket": "dual"}"#).unwrap();
    let (code, r, _) = cli(&format!("verify log-canonical --config {}", cfg.display()));
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["n"], 3);
    assert_eq!(r["checks"][0]["name"], "log-canonical/dual");
    // explicit flags win over the file
    let (_, r, _) = cli(&format!("verify log-canonical --config {} --n 2", cfg.display()));
    assert_eq!(r["n"], 2);
}

#[test]
fn quiver_exports() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("q4.dot");
    let out = run(["double-cluster", "quiver", "--n", "4", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.contains("29 vertices"));
    assert!(out.stdout.contains("58 arrows"));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -> ").count(), 58);

    let out = run(["double-cluster", "quiver", "--n", "2", "--json", "-"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let fixture: Value = serde_json::from_str(include_str!("fixtures/q2.json")).unwrap();
    assert_eq!(doc, fixture);
    assert!(out.stderr.contains("8 arrows"));

    let out = run(["double-cluster", "quiver", "--n", "3", "--diagonal", "--json", "-"]);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(doc["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| !v["name"].as_str().unwrap().starts_with("f_") && !v["name"].as_str().unwrap().starts_with("phi_")));
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(["double-cluster", "verify", "identity", "--n", "3", "--trials", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(r["status"], "pass");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_double-cluster");
    let status = Command::new(bin).args(["verify", "corollary", "--n", "2"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
    let status = Command::new(bin)
        .args(["verify", "log-canonical", "--n", "2", "--points", "2", "--corrupt"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_VIOLATION));
    let status = Command::new(bin).args(["quiver", "--n", "3"]).output().unwrap();
    assert_eq!(status.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8_lossy(&status.stdout).contains("28 arrows"));
}
