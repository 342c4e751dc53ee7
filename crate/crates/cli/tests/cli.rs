use std::process::Command as Process;

use bosegas_cli::args::Cli;
use bosegas_cli::config::{Command, OutputFormat, RunConfig};
use bosegas_cli::report::{csv_body, Cell};
use bosegas_cli::{run, CliError, EXIT_CONFIG, EXIT_NUMERICAL};
use clap::Parser;
use proptest::prelude::*;

fn config(args: &[&str]) -> Result<RunConfig, CliError> {
    Cli::try_parse_from(std::iter::once("bosegas").chain(args.iter().copied())).unwrap().into_config()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_bosegas"))
}

#[test]
fn flag_form_of_the_command() {
    let c = config(&["--command", "scatter", "--potential", "hardcore:r0=1"]).unwrap();
    assert_eq!(c.command, Command::Scatter);
    assert_eq!(c.get("potential"), Some("hardcore:r0=1"));
    assert_eq!(c.get("mu"), Some("1"));
    assert_eq!(c.output_format, OutputFormat::Csv);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"command": "scatter", "potential": "squarewell:r0=1,v0=2", "mu": 0.5}"#).unwrap();
    let c = config(&["--config", path.to_str().unwrap(), "--mu", "2"]).unwrap();
    assert_eq!(c.get("mu"), Some("2"));
    assert_eq!(c.get("potential"), Some("squarewell:r0=1,v0=2"));
}

#[test]
fn unknown_keys_name_the_nearest_valid_key() {
    match config(&["scatter", "--potential", "hardcore:ro=1"]) {
        Err(CliError::UnknownKey { key, suggestion, .. }) => {
            assert_eq!(key, "ro");
            assert_eq!(suggestion.as_deref(), Some("r0"));
        }
        other => panic!("{other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"command": "bounds", "y_gird": "1e-8"}"#).unwrap();
    match config(&["--config", path.to_str().unwrap()]) {
        Err(CliError::UnknownKey { key, suggestion, .. }) => {
            assert_eq!(key, "y_gird");
            assert_eq!(suggestion.as_deref(), Some("y_grid"));
        }
        other => panic!("{other:?}"),
    }
    // A flag that belongs to another command.
    assert!(matches!(config(&["scatter", "--potential", "zero", "--trap", "box:l=1"]), Err(CliError::UnknownKey { .. })));
}

#[test]
fn parse_errors_carry_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"command\": \"tf\",\n  \"n\": \n}").unwrap();
    match config(&["--config", path.to_str().unwrap()]) {
        Err(CliError::Parse { location, .. }) => assert!(location.contains(":4:"), "{location}"),
        other => panic!("{other:?}"),
    }
    match config(&["bounds", "--y-grid", "1:2"]) {
        Err(CliError::Parse { location, .. }) => assert_eq!(location, "--y-grid"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_round_trips() {
    let c = config(&[
        "gp-tf-limit",
        "--g-grid",
        "10:1000:3log",
        "--cells",
        "500",
        "--format",
        "json",
        "--rel-tol",
        "1e-9",
        "--output",
        "out.json",
    ])
    .unwrap();
    assert_eq!(RunConfig::from_json(c.to_json()).unwrap(), c);
}

#[test]
fn scatter_hard_core_row() {
    let report = run(&config(&["scatter", "--potential", "hardcore:r0=1"]).unwrap()).unwrap();
    let row = &report.rows[0];
    let (Cell::Num(a), Cell::Num(s)) = (&row[1], &row[2]) else { panic!() };
    assert!((a - 1.0).abs() < 1e-10 && (s - 1.0).abs() < 1e-6);
}

#[test]
fn bounds_sweep_has_fifty_rows() {
    let report = run(&config(&["bounds", "--dim", "3", "--y-grid", "1e-12:1e-4:50"]).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 50);
    let names: Vec<&str> = report.columns.iter().take(4).map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["Y", "upper_ratio", "lsy_lower", "dyson_lower"]);
    for row in &report.rows {
        assert_eq!(row.len(), report.columns.len());
    }
    assert!(report.columns.iter().all(|c| !c.unit.is_empty()));
}

#[test]
fn reports_render_in_both_formats() {
    let c = config(&["tf", "--n", "1:100:3log", "--a", "0.1"]).unwrap();
    let report = run(&c).unwrap();
    let csv = report.to_csv();
    let body = csv_body(&csv);
    assert!(body.starts_with("n,mu_tf,"));
    assert_eq!(body.lines().count(), 4);
    assert!(csv.lines().any(|l| l.starts_with("# units: n=1 mu_tf=energy")));
    let json = report.to_json();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
    assert_eq!(json["metadata"]["command"], "tf");
}

#[test]
fn binary_exit_codes_and_error_names() {
    let out = bin().args(["scatter", "--potential", "zero", "--dim", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NUMERICAL));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NoLogAsymptote"));

    let out = bin().args(["scatter", "--potential", "hardcore:ro=1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownKey"));

    let out = bin().args(["bogolubov", "--mode-a", "1", "--mode-b", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NUMERICAL));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DomainError"));

    let out = bin().arg("--help").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("--y-grid [1e-12:1e-4:50log]"));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("foldy.json");
    let status = bin().args(["foldy", "--format", "json", "--output", path.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn thread_cap_keeps_results_identical() {
    let run_with = |threads: &str| {
        let out = bin()
            .env("BOSEGAS_THREADS", threads)
            .args(["bogolubov", "--mode-b", "0.5:4.5:9"])
            .output()
            .unwrap();
        csv_body(&String::from_utf8(out.stdout).unwrap())
    };
    assert_eq!(run_with("1"), run_with("4"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_of_random_configs(mu in 0.01f64..100.0, points in 2usize..100, log in any::<bool>(), json in any::<bool>()) {
        let grid = format!("1e-10:1e-3:{points}{}", if log { "log" } else { "" });
        let mu = mu.to_string();
        let mut args = vec!["bounds", "--mu", &mu, "--y-grid", &grid];
        if json {
            args.extend(["--format", "json"]);
        }
        let c = config(&args).unwrap();
        prop_assert_eq!(RunConfig::from_json(c.to_json()).unwrap(), c);
    }
}
