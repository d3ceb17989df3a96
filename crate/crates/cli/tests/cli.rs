use std::process::{Command, Output};

use serde_json::Value;
use ssr_cli::report::{Status, VerificationReport};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssr-sim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = sim(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn verify_passes_and_is_reproducible() {
    let run = || {
        let o = sim(&["verify", "--suite", "paper", "--format", "json", "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0));
        let mut report: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(report.claims.iter().all(|c| c.status == Status::Pass));
        for c in &mut report.claims {
            c.runtime_ms = 0;
        }
        report.to_json()
    };
    let first = run();
    assert_eq!(first, run());
    let ids: Vec<String> = serde_json::from_str::<VerificationReport>(&first)
        .unwrap()
        .claims
        .into_iter()
        .map(|c| c.claim_id)
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn verify_text_has_one_line_per_claim() {
    let o = sim(&["verify", "--suite", "paper", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let claim_lines = out.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).count();
    assert_eq!(claim_lines + 1, out.lines().count());
    assert!(out.ends_with("claims pass\n"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(sim(&["verify", "--suite", "other"]).status.code(), Some(2));
    assert_eq!(sim(&["hiding", "entangled", "--n-min", "0"]).status.code(), Some(2));
    assert_eq!(sim(&["hiding", "entangled", "--n-min", "3", "--n-max", "2"]).status.code(), Some(2));
    assert_eq!(sim(&["hiding", "entangled", "--n-max", "13"]).status.code(), Some(2));
    let o = sim(&["hiding", "coherent", "--alphas", "6.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--cutoff"));
    assert_eq!(sim(&["state", "show", "nothing"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_fails_with_message() {
    let o = sim(&["hiding", "entangled", "--output", "/nonexistent-dir/out.csv"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("ssr-sim-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let o = sim(&["hiding", "entangled", "--n-max", "2", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("N,success_bit0"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn entangled_sweep_rows() {
    let rows = json(&["hiding", "entangled", "--n-min", "1", "--n-max", "12", "--format", "json"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let worst: Vec<f64> = rows.iter().map(|r| r["worst_case"].as_f64().unwrap()).collect();
    assert!((worst[0] - 0.5).abs() < 1e-10);
    assert!((worst[8] - 0.9).abs() < 1e-10);
    assert!(worst.windows(2).all(|w| w[1] > w[0]));
    for r in rows {
        assert!((r["worst_case"].as_f64().unwrap() - r["N/(N+1)"].as_f64().unwrap()).abs() < 1e-10);
    }
}

#[test]
fn coherent_sweep_rows() {
    let rows = json(&["hiding", "coherent", "--alphas", "1,3,5", "--format", "json"]);
    let rows = rows.as_array().unwrap();
    let success: Vec<f64> = rows.iter().map(|r| r["success"].as_f64().unwrap()).collect();
    assert!(success[0] < success[1]);
    assert!(success[2] >= 0.99);
    assert!(rows.iter().all(|r| r["abs_diff"].as_f64().unwrap() < 1e-6));
    // An explicit cutoff lifts the guard.
    assert!(sim(&["hiding", "coherent", "--alphas", "6.5", "--cutoff", "20"]).status.success());
}

#[test]
fn state_show_rho1() {
    let v = json(&["state", "show", "rho1", "--format", "json"]);
    assert_eq!(v["state"]["kind"], "density");
    assert_eq!(v["state"]["data"].as_array().unwrap().len(), 16);
    assert_eq!(v["diagnostics"]["ppt"], true);
    assert_eq!(v["diagnostics"]["dephase_fixed"], false);
}

#[test]
fn state_show_resource_and_vacuum() {
    let v = json(&["state", "show", "resource", "--n", "2", "--format", "json"]);
    assert_eq!(v["state"]["kind"], "vector");
    assert_eq!(v["state"]["data"].as_array().unwrap().len(), 9);
    let v = json(&["state", "show", "rho2", "--alpha", "0", "--format", "json"]);
    let data = v["state"]["data"].as_array().unwrap();
    assert_eq!(data[0][0].as_f64(), Some(1.0));
    assert!(data[1..].iter().all(|z| z[0].as_f64() == Some(0.0) && z[1].as_f64() == Some(0.0)));
    assert_eq!(v["diagnostics"]["dephase_fixed"], true);
}

#[test]
fn state_show_round_trips_into_core() {
    let o = sim(&["state", "show", "multiparty", "--parties", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let doc: ssr_core::fock::StateDocument = serde_json::from_value(v["state"].clone()).unwrap();
    assert!(doc.into_state().is_ok());
    assert_eq!(v["diagnostics"]["ppt"], Value::Null);
}

#[test]
fn multiparty_and_teleport_tables() {
    let rows = json(&["multiparty", "--parties", "3,4", "--format", "json"]);
    assert_eq!(rows.as_array().unwrap().len(), 3 + 7);
    let rows = json(&["teleport-demo", "--qubits", "3", "--format", "json"]);
    for r in rows.as_array().unwrap() {
        assert!((r["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}
