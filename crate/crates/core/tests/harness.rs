mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use ldmd::harness::{bundled_config, run_experiment, sweep, ExperimentConfig, RunOptions, BUNDLED_CONFIGS};
use ldmd::Error;

const SMALL: &str = r#"{
  "name": "burgers_aldmd_small",
  "equation": "burgers",
  "grid": { "cells": 100, "n_steps": 400 },
  "method": {
    "kind": "aldmd",
    "rank": { "fixed": 8 },
    "n1": 60,
    "epsilon": 1e-3,
    "window": 20,
    "snapshot_policy": { "fixed": 30 }
  },
  "solution": { "stride": 7 }
}"#;

const NO_TIMING: RunOptions = RunOptions { record_timing: false };

fn small() -> ExperimentConfig {
    ExperimentConfig::from_json(SMALL).unwrap()
}

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names
}

#[test]
fn identical_runs_write_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_experiment(&small(), a.path(), NO_TIMING).unwrap();
    run_experiment(&small(), b.path(), NO_TIMING).unwrap();
    let names = files(a.path());
    assert_eq!(names, ["errors.csv", "quantities.csv", "residuals.csv", "solution.csv", "stages.csv", "summary.csv"]);
    assert_eq!(names, files(b.path()));
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap(), "{n}");
    }
}

#[test]
fn csv_files_are_consistent_with_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&small(), dir.path(), RunOptions::default()).unwrap();
    let n_steps = outcome.problem.n_steps;

    let (header, summary) = read_rows(&dir.path().join("summary.csv"));
    assert_eq!(header, ["method", "equation", "gamma", "stages", "mre", "wall_time_s", "status"]);
    assert_eq!(summary.len(), 1);
    let row = &summary[0];
    assert_eq!((row[0].as_str(), row[1].as_str(), row[6].as_str()), ("aldmd", "burgers", "ok"));
    let mre: f64 = row[4].parse().unwrap();
    let gamma: f64 = row[2].parse().unwrap();

    let (header, errors) = read_rows(&dir.path().join("errors.csv"));
    assert_eq!(header, ["t", "re"]);
    assert_eq!(errors.len(), n_steps);
    let recomputed = errors.iter().map(|r| r[1].parse::<f64>().unwrap()).sum::<f64>() / n_steps as f64;
    assert!((recomputed - mre).abs() <= 1e-12 * mre, "{recomputed} vs {mre}");

    let (header, stages) = read_rows(&dir.path().join("stages.csv"));
    assert_eq!(header, ["i", "t_start", "t_end", "n_i", "c_i", "correction_invoked"]);
    assert_eq!(stages.len(), row[3].parse::<usize>().unwrap());
    let fom: usize = stages.iter().map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert!((1.0 - fom as f64 / n_steps as f64 - gamma).abs() <= 1e-12);

    // every correction shows up twice in the residual trace
    let (header, residuals) = read_rows(&dir.path().join("residuals.csv"));
    assert_eq!(header, ["t", "delta"]);
    let corrections = stages.iter().filter(|r| r[5] == "true").count();
    let repeated = residuals.windows(2).filter(|w| w[0][0] == w[1][0]).count();
    assert_eq!(repeated, corrections);

    let (header, solution) = read_rows(&dir.path().join("solution.csv"));
    let dim = outcome.problem.state_dim();
    assert_eq!(header.len(), 1 + 2 * dim);
    assert_eq!((header[1].as_str(), header[2].as_str()), ("u0_re", "u0_im"));
    assert_eq!(solution.len(), n_steps / 7 + 1 + usize::from(n_steps % 7 != 0));
    assert!(solution.iter().all(|r| r[2..].iter().step_by(2).all(|im| im.parse::<f64>().unwrap() == 0.0)));
}

#[test]
fn multi_field_problems_write_one_error_file_per_quantity() {
    let mut cfg = bundled_config("maxwell_tm_pldmd_g48").unwrap().unwrap();
    cfg.grid.cells = Some(8);
    cfg.solution = None;
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_experiment(&cfg, dir.path(), NO_TIMING).unwrap();
    assert_eq!(outcome.summary.gamma, 0.48);
    for q in ["magnetic_field", "electric_field", "polarization_current"] {
        let (header, rows) = read_rows(&dir.path().join(format!("errors_{q}.csv")));
        assert_eq!(header, ["t", "re"]);
        assert_eq!(rows.len(), 2000);
    }
    let (_, quantities) = read_rows(&dir.path().join("quantities.csv"));
    assert_eq!(quantities.len(), 4);
    assert!(!dir.path().join("solution.csv").exists());
    assert!(!dir.path().join("residuals.csv").exists());
}

#[test]
fn sweep_records_failures_and_carries_on() {
    let mut bad = small();
    bad.name = "kdv_dmd_x".into();
    bad.equation = "kdv".into();
    let out = tempfile::tempdir().unwrap();
    let rows = sweep(&[small(), bad], out.path(), NO_TIMING).unwrap();
    assert_eq!(rows[0].status, "ok");
    assert_eq!(rows[1].status, "config_error");
    let (_, summary) = read_rows(&out.path().join("summary.csv"));
    assert_eq!(summary.len(), 2);
    assert!(out.path().join("burgers_aldmd_small/errors.csv").exists());
    assert!(matches!(sweep(&[], out.path(), NO_TIMING), Err(Error::Config(_))));
}

fn ldmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ldmd"));
    cmd.env("RUST_LOG", "off");
    cmd
}

#[test]
fn command_line_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, SMALL).unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, SMALL.replace("\"burgers\"", "\"kdv\"")).unwrap();
    let unstable = dir.path().join("unstable.json");
    fs::write(&unstable, SMALL.replace("\"n_steps\": 400", "\"n_steps\": 400, \"t_end\": 50.0")).unwrap();

    let status = |cmd: &mut Command| cmd.output().unwrap().status.code().unwrap();
    assert_eq!(status(ldmd().args(["validate", "--config"]).arg(&good)), 0);
    let out = ldmd().args(["validate", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown equation: kdv"));
    assert_eq!(status(ldmd().args(["validate", "--config", "no_such_config"])), 2);

    let run_dir = dir.path().join("run");
    assert_eq!(status(ldmd().args(["run", "--config"]).arg(&good).arg("--out").arg(&run_dir)), 0);
    assert!(run_dir.join("summary.csv").exists());
    assert_eq!(status(ldmd().args(["run", "--config"]).arg(&unstable).arg("--out").arg(dir.path().join("u"))), 3);

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(status(ldmd().args(["sweep", "--config-dir"]).arg(&empty).arg("--out").arg(dir.path().join("s"))), 2);

    let listed = ldmd().arg("list-configs").output().unwrap();
    assert_eq!(listed.status.code(), Some(0));
    let names: Vec<String> = String::from_utf8(listed.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(names, BUNDLED_CONFIGS.iter().map(|c| c.name.to_string()).collect::<Vec<_>>());
}
