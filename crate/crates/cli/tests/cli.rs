use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn war(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_war")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/v1").join(name).display().to_string()
}

#[test]
fn analyze_absorbing_graph() {
    let out = war(&["analyze", "--n", "6", "--rule", "standard", "--edges", "both", "--expect-absorbing"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["wandering"], 0);
    assert_eq!(v["attaining"], 5040);
    assert_eq!(v["total_states"], 5040);
    assert_eq!(v["edge_filter"], "both-orders");
    assert_eq!(v["audit"]["out_violations"], 0);
    assert_eq!(v["audit"]["in_violations"], 0);
    assert!(v["elapsed_ms"].is_null());
    assert_eq!(v["config"]["n"], 6);
}

#[test]
fn analyze_claim_failure_exits_2() {
    let out = war(&["analyze", "--n", "6", "--edges", "seat-left", "--expect-absorbing"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["wandering"].as_u64().unwrap() > 0);
}

#[test]
fn timing_is_opt_in() {
    let out = war(&["--timing", "analyze", "--n", "4"]);
    assert!(json(&out)["elapsed_ms"].is_u64());
}

#[test]
fn expected_length_n2() {
    let out = war(&["expected-length", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mean_equal_split"], 1.0);
}

#[test]
fn usage_errors_exit_1_with_one_line() {
    for args in [
        &["analyze", "--n", "4", "--frob"][..],
        &["analyze", "--n", "13"],
        &["expected-length", "--n", "4", "--pl1", "1.5"],
        &["expected-length", "--n", "4", "--pl1", "0"],
        &["analyze", "--n", "4", "--rule", "russian"],
        &["analyze", "--n", "4", "--format", "csv"],
        &["nonsense"],
    ] {
        let out = war(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let a = war(&["mc-classic", "--trials", "300", "--seed", "9", "--threads", "1"]);
    let b = war(&["mc-classic", "--trials", "300", "--seed", "9", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = war(&["expected-length", "--n", "4", "--trials", "2000", "--seed", "3"]);
    let d = war(&["expected-length", "--n", "4", "--trials", "2000", "--seed", "3"]);
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(json(&c)["config"]["seed"], 3);
}

#[test]
fn csv_outputs() {
    let out = war(&["tail-curve", "--n", "4", "--ks", "0,1,2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,p_alive");
    assert_eq!(lines.len(), 4);
    let out = war(&["decay-cert", "--n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("k,steps,p_alive,bound\n"));
}

#[test]
fn find_then_verify_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let found = dir.path().join("found.json");
    let out = war(&["find-cycle", "--n", "6", "--limit", "1", "--output", found.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&found).unwrap()).unwrap();
    assert!(v["count"].as_u64().unwrap() >= 1);

    let cert = dir.path().join("cert.json");
    std::fs::write(&cert, v["certificates"][0].to_string()).unwrap();
    let out = war(&["verify-cycle", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);

    let mut bad = v["certificates"][0].clone();
    bad["period"] = Value::from(bad["period"].as_u64().unwrap() + 1);
    std::fs::write(&cert, bad.to_string()).unwrap();
    assert_eq!(war(&["verify-cycle", "--certificate", cert.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_deal_fixture_and_failures() {
    let out = war(&["verify-deal", "--deal", &fixture("classic_cycle_52.txt"), "--blocks", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["ok"], true);
    assert_eq!(v["report"]["period_in_values"], 26);

    let out = war(&["verify-deal", "--deal", &fixture("classic_cycle_52.txt"), "--policy", "own-first"]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(war(&["verify-deal", "--deal", "L: 1 2 4 ; R: 5 6 3"]).status.code(), Some(0));
    assert_eq!(war(&["verify-deal", "--deal", "L: 6 5 4 ; R: 3 2 1"]).status.code(), Some(2));
    assert_eq!(war(&["verify-deal", "--deal", "/no/such/file"]).status.code(), Some(1));
}

#[test]
fn simulate_classic_is_seeded() {
    let a = war(&["simulate-classic", "--seed", "5"]);
    let b = war(&["simulate-classic", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["record"]["truncated"], false);
    let out = war(&[
        "simulate-classic",
        "--deal",
        &fixture("classic_cycle_52.txt"),
        "--policy",
        "seat-left",
        "--max-steps",
        "520",
    ]);
    assert_eq!(json(&out)["record"]["truncated"], true);
}

#[test]
fn two_outcome_report() {
    let v = json(&war(&["two-outcome", "--n", "4"]));
    assert_eq!(v["count"], 0);
    let v = json(&war(&["two-outcome", "--n", "4", "--rule", "cyclic"]));
    assert!(v["count"].as_u64().unwrap() > 0);
}
