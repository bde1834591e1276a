// Copyright 2026 The qfridge Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn qfridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfridge"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn steady_prints_a_json_row() {
    let out = qfridge(&["steady", "--e1", "0.8", "--alpha", "0.5"]);
    assert!(out.status.success());
    let row: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(row["alpha"], 0.5);
    let q = &row["result"]["report"]["q_dot"];
    let (q1, q3) = (q[0].as_f64().unwrap(), q[2].as_f64().unwrap());
    assert!(q1 > 0.0);
    assert!((q1 / q3.abs() - 0.8 / 4.2).abs() < 1e-8);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("point.json");
    std::fs::write(&cfg, r#"{"e1": 1.0, "alpha": 0.2, "gamma0": 0.02}"#).unwrap();
    let out = qfridge(&[
        "steady",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.7",
    ]);
    assert!(out.status.success());
    let row: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(row["e1"], 1.0);
    assert_eq!(row["alpha"], 0.7);
    assert_eq!(row["gamma0"], serde_json::json!([0.02, 0.02, 0.02]));
}

#[test]
fn output_key_in_config_names_the_destination() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("row.json");
    let cfg = dir.path().join("point.json");
    std::fs::write(
        &cfg,
        format!(r#"{{"output": {:?}}}"#, dest.to_str().unwrap()),
    )
    .unwrap();
    let out = qfridge(&["steady", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(std::fs::read_to_string(dest).unwrap().contains("q_dot"));
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = qfridge(&[
        "sweep",
        "--axis",
        "e1=0.5,1.0,1.5",
        "--axis",
        "alpha=0,0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("e1,e2,e3,g,alpha,"));
}

#[test]
fn sweep_output_is_reproducible() {
    let args = [
        "sweep",
        "--model",
        "incoherent-correlated",
        "--axis",
        "alpha=0:0.9:0.1",
    ];
    assert_eq!(qfridge(&args).stdout, qfridge(&args).stdout);
}

#[test]
fn transient_table_has_the_requested_samples() {
    let out = qfridge(&[
        "transient",
        "--alpha",
        "1",
        "--init",
        "dark-orthogonal",
        "--t-max",
        "100",
        "--samples",
        "6",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().next().unwrap().ends_with("p_dark,trace"));
}

#[test]
fn figure_writes_csv_files_into_the_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = qfridge(&["figure", "fig5a", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let listed: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(listed.len(), 5);
    for p in listed {
        assert!(p.ends_with(".csv"));
        assert!(std::path::Path::new(&p).exists());
    }
}

#[test]
fn verify_passes_and_reports_json() {
    let out = qfridge(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        &["steady", "--alpha", "1.5"][..],
        &["steady", "--e1", "6"],
        &["steady", "--no-such-flag"],
        &["sweep", "--axis", "temperature=1"],
        &["figure", "fig9", "--out", "."],
        &["steady", "--init", "entangled"],
        &["verify", "--level", "thorough"],
    ] {
        assert_eq!(qfridge(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"e1": 0.8, "coupling": 0.1}"#).unwrap();
    let out = qfridge(&["steady", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coupling"));
}

#[test]
fn help_succeeds() {
    assert!(qfridge(&["--help"]).status.success());
}
