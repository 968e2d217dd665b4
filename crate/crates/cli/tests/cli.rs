//! End-to-end tests of the command surface: exit codes, output determinism
//! and format contracts.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qq-engine"))
}

#[test]
fn zr_json_is_deterministic_and_normalized() {
    let run = || {
        bin()
            .args(["zr", "--r", "1", "--cap-q", "2", "--cap-a", "2", "--seeds", "7", "--direction", "h"])
            .output()
            .expect("runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "byte-identical outputs for identical cfg+seed");
    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).expect("json");
    assert_eq!(doc["command"], "zr");
    let normalized = &doc["runs"][0]["normalized"];
    // Constant term of the normalized series is 1.
    let term = normalized["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["exp"].as_array().unwrap().iter().all(|e| e.as_i64() == Some(0)))
        .expect("constant term present");
    assert_eq!(term["num"], "1");
    assert_eq!(term["den"], "1");
}

#[test]
fn zr_directions_agree_on_certified_coefficients() {
    let get = |dir: &str| {
        let out = bin()
            .args(["zr", "--r", "1", "--cap-q", "2", "--cap-a", "2", "--seeds", "7", "--direction", dir])
            .output()
            .expect("runs");
        assert!(out.status.success());
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        doc["runs"][0]["raw"].clone()
    };
    assert_eq!(get("h"), get("v"));
}

#[test]
fn zr_csv_has_exponent_and_value_columns() {
    let out = bin()
        .args([
            "zr", "--r", "1", "--cap-q", "1", "--cap-a", "1", "--seeds", "3", "--format", "csv",
        ])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Q,A,num,den"));
    for line in lines {
        assert_eq!(line.split(',').count(), 4, "row {line}");
    }
}

#[test]
fn chi_y_counts_fixed_points_at_m_one() {
    let out = bin()
        .args(["chi-y", "--r", "2", "--cap-q", "1", "--cap-m", "8", "--seeds", "5"])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let genus = &doc["runs"][0]["genus"];
    // Coefficient of Q^1 at m = 1 is the number of 1-box pairs: 2.
    let mut total = num::BigRational::from_integer(0.into());
    for t in genus["terms"].as_array().unwrap() {
        let e = t["exp"].as_array().unwrap();
        if e[0].as_i64() == Some(1) {
            let num: num::BigInt = t["num"].as_str().unwrap().parse().unwrap();
            let den: num::BigInt = t["den"].as_str().unwrap().parse().unwrap();
            total += num::BigRational::new(num, den);
        }
    }
    assert_eq!(total, num::BigRational::from_integer(2.into()));
}

#[test]
fn verify_suites_pass_and_write_reports() {
    let dir = std::env::temp_dir().join("qq_engine_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("identity316.json");
    let out = bin()
        .args([
            "verify",
            "identity-3-16",
            "--seeds",
            "3",
            "--out",
            report_path.to_str().unwrap(),
        ])
        .output()
        .expect("runs");
    assert!(out.status.success(), "exit 0 on pass");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["suite"], "identity-3-16");
    assert!(report["calibration"]["identity_3_16_rhs"].as_str().is_some());
}

#[test]
fn invalid_config_exits_2() {
    // Unknown suite id.
    let out = bin().args(["verify", "no-such-suite"]).output().expect("runs");
    assert_eq!(out.status.code(), Some(2));
    // Zero seeds for zr.
    let out2 = bin()
        .args(["zr", "--r", "1", "--seeds", ""])
        .output()
        .expect("runs");
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn oracle_suites_run_quickly() {
    for id in ["oracle-contraction", "oracle-trace", "calibration"] {
        let out = bin().args(["verify", id, "--seeds", "3"]).output().expect("runs");
        assert!(out.status.success(), "{id} should pass");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("PASS"), "{id}: {text}");
    }
}
