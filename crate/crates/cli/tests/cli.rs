use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dynet_cli::{run, RunOptions, RunReport, ScenarioConfig, ScenarioKind};
use dynet_core::simulator::{EventKind, EventTrajectory};

fn dynet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynet"))
        .args(args)
        .env_remove("DYNET_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.display().to_string()
}

#[test]
fn validate_reports_named_violations() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.json", r#"{"kind": "si", "n": 20, "lambda": 1, "mu": 1, "beta": 1}"#);
    let out = dynet(&["validate", &good]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ok"));

    let zero = write_config(dir.path(), "zero.json", r#"{"kind": "connectivity", "n": 20, "lambda": 1, "trials": 0}"#);
    let out = dynet(&["validate", &zero]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("trials:"), "{}", stdout(&out));

    let conflict = write_config(
        dir.path(),
        "conflict.json",
        r#"{"kind": "si", "n": 20, "lambda": 1, "mu": 3, "p": 0.5, "alpha": 0.5, "beta": 1}"#,
    );
    let out = dynet(&["validate", &conflict]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("conflict"), "{}", stdout(&out));

    let missing = dir.path().join("missing.json").display().to_string();
    let out = dynet(&["validate", &missing]);
    assert_eq!(out.status.code(), Some(3));
    let garbage = write_config(dir.path(), "garbage.json", "{ not json");
    assert_eq!(dynet(&["validate", &garbage]).status.code(), Some(2));
}

#[test]
fn list_names_every_kind_once() {
    let out = dynet(&["list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let headings: Vec<&str> = text.lines().filter(|l| !l.starts_with(' ')).collect();
    for kind in ScenarioKind::ALL {
        assert_eq!(headings.iter().filter(|h| **h == kind.as_str()).count(), 1, "{kind}");
    }
    assert_eq!(headings.len(), ScenarioKind::ALL.len());
    assert!(headings.contains(&"figure1") && headings.contains(&"lemma4"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "si.json",
        r#"{"kind": "si", "name": "rerun", "ns": [30, 60], "lambda": 0.5, "mu": 1, "beta": 2, "trials": 25, "seed": 11}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(dynet(&["run", &cfg, "--out", a.to_str().unwrap(), "--jobs", "1"]).status.success());
    assert!(dynet(&["run", &cfg, "--out", b.to_str().unwrap(), "--jobs", "4"]).status.success());
    for file in ["rerun_trials.csv", "rerun.report.json"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
    let csv = fs::read_to_string(a.join("rerun_trials.csv")).unwrap();
    assert!(csv.starts_with("n,variant,trial,seed,infected,end_time,tau\n"));
    // Trial seeds run on from the config seed across both sizes.
    assert!(csv.contains("\n30,base,0,11,") && csv.contains("\n60,base,0,36,"));

    let c = dir.path().join("c");
    assert!(dynet(&["run", &cfg, "--out", c.to_str().unwrap(), "--seed", "12"]).status.success());
    assert_ne!(fs::read(a.join("rerun_trials.csv")).unwrap(), fs::read(c.join("rerun_trials.csv")).unwrap());
}

#[test]
fn node_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "big.json", r#"{"kind": "si", "n": 100, "lambda": 1, "mu": 1, "beta": 1, "trials": 2}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_dynet"))
        .args(["run", &cfg, "--out", dir.path().to_str().unwrap()])
        .env("DYNET_MAX_N", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap of 50") && err.contains("DYNET_MAX_N"), "{err}");

    let out = Command::new(env!("CARGO_BIN_EXE_dynet"))
        .args(["run", &cfg, "--out", dir.path().to_str().unwrap()])
        .env("DYNET_MAX_N", "100")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn check_flag_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    // Ratio at k = 1e6 sits just outside the dense-regime band.
    let cfg = write_config(
        dir.path(),
        "mixing.json",
        r#"{"kind": "mixing", "k": 1000000, "p": 0.3, "alpha": 1, "c": 2, "criteria": [3]}"#,
    );
    let out_dir = dir.path().to_str().unwrap();
    let out = dynet(&["run", &cfg, "--out", out_dir]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[FAIL] criterion  3"));
    assert_eq!(dynet(&["run", &cfg, "--check", "--out", out_dir]).status.code(), Some(1));

    let cfg = write_config(dir.path(), "tv.json", r#"{"kind": "bounds", "n": 12, "lambda": 1, "criteria": [2]}"#);
    let out = dynet(&["run", &cfg, "--check", "--out", out_dir]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[PASS] criterion  2"));
}

#[test]
fn mixing_report_has_numeric_asymptotic_and_ratio() {
    let cfg = ScenarioConfig::from_json(r#"{"kind": "mixing", "k": 1000000, "p": 0.3, "alpha": 1}"#).unwrap();
    let out = run(&cfg, &RunOptions::default()).unwrap();
    let theory = &out.report.theory;
    let numeric = theory["mixing_time_numeric[constant_p]"];
    let asymptotic = theory["mixing_time_asymptotic[constant_p]"];
    // log(1e6) / (2 (lambda + mu)) with lambda + mu = alpha / (p (1 - p)).
    let expected = (1e6f64).ln() / (2.0 / 0.21);
    assert!((asymptotic - expected).abs() < 1e-12 * expected);
    assert!((theory["ratio[constant_p]"] - numeric / asymptotic).abs() < 1e-15);
    assert!(out.report.checks.is_empty());
}

#[test]
fn report_replays_from_embedded_config() {
    let cfg = ScenarioConfig::from_json(
        r#"{"kind": "connectivity", "ns": [40, 80], "lambda": 2, "trials": 30, "seed": 5}"#,
    )
    .unwrap();
    let first = run(&cfg, &RunOptions::default()).unwrap();
    let text = first.report.to_json();
    let parsed: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.schema, "dynet.run-report");
    assert_eq!(parsed.schema_version, 1);
    let again = run(&parsed.config, &RunOptions { jobs: Some(2), ..Default::default() }).unwrap();
    assert_eq!(again.report.to_json(), text);
    assert_eq!(again.artifacts, first.artifacts);
    // Aggregates point at the rows they came from.
    for agg in &parsed.aggregates {
        assert!(agg.source.starts_with("connectivity_trials.csv:"), "{}", agg.source);
    }
}

#[test]
fn trajectory_export_round_trips() {
    let cfg = ScenarioConfig::from_json(
        r#"{"kind": "si", "name": "traj", "n": 25, "lambda": 0.3, "mu": 0.3, "beta": 0.8, "horizon": 10, "trials": 3, "seed": 2, "export_trajectory": true}"#,
    )
    .unwrap();
    let out = run(&cfg, &RunOptions::default()).unwrap();
    let text = String::from_utf8(out.artifact("traj_trajectory.jsonl").unwrap().contents.clone()).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let kind = v["kind"].as_str().unwrap();
        assert!(["edge_on", "edge_off", "infect"].contains(&kind));
        assert_eq!(v["j"].is_null(), kind == "infect");
        assert!(v["t"].as_f64().unwrap() <= 10.0);
    }
    let events = EventTrajectory::events_from_jsonl(&text).unwrap();
    assert!(events.iter().any(|e| matches!(e.kind, EventKind::EdgeOn(..))));
    assert!(events.windows(2).all(|w| w[0].t <= w[1].t));
    assert_eq!(out.report.metadata["trajectory"]["file"], "traj_trajectory.jsonl");
}

#[test]
fn figure1_emits_default_and_sweep_curves() {
    let cfg = ScenarioConfig::from_json(r#"{"kind": "figure1", "trials": 5, "grid_points": 31, "seed": 3}"#).unwrap();
    let out = run(&cfg, &RunOptions::default()).unwrap();
    let text = String::from_utf8(out.artifact("figure1_curves.csv").unwrap().contents.clone()).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["series", "lambda", "mu", "beta", "t", "infected"]
    );
    let mut series: Vec<String> = reader.records().map(|r| r.unwrap()[0].to_string()).collect();
    series.dedup();
    assert_eq!(
        series,
        [
            "default_single_run",
            "default",
            "lambda_x0.5",
            "mu_x0.5",
            "beta_x0.5",
            "lambda_x2",
            "mu_x2",
            "beta_x2"
        ]
    );
    assert_eq!(out.report.config.lambda, None, "defaults are not written into the config");
    assert!(out.report.checks.iter().any(|c| c.criterion == 8));
}

#[test]
fn pa_degree_table_contract() {
    let cfg = ScenarioConfig::from_json(
        r#"{"kind": "pa_turnover", "name": "pa", "n": 300, "m": 2, "steps": 3000, "policy": "hazard_gamma", "gamma": 2.5, "seed": 4}"#,
    )
    .unwrap();
    let out = run(&cfg, &RunOptions::default()).unwrap();
    let text = String::from_utf8(out.artifact("pa_degrees.csv").unwrap().contents.clone()).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["degree", "count", "predicted_density"]);
    let total: u64 = reader.records().map(|r| r.unwrap()[1].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 300);
    // The calibrated hazard is embedded in the report.
    let policy = &out.report.metadata["policy"];
    assert_eq!(policy["policy"], "hazard_gamma");
    assert_eq!(policy["mode"], "piecewise");
    assert!(policy["young_hazard"].as_f64().unwrap() > 0.0);
}
