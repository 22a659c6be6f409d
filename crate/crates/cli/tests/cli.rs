//! End to end tests driving the compiled binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftpress"))
        .args(args)
        .env_remove("SHIFTPRESS_THREADS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn pressure_run_writes_a_results_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "pressure",
            "system": "full-2",
            "potential": {"constant": 0.0},
            "schedule": {"n": [4, 8], "m": 0, "max_depth": 10}
        }"#,
    );
    let out = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let csv = dir.path().join("pressure-results.csv");
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,eps,value,oracle,abs_diff\n"));
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("6.93147180560e-1"));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("pressure-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["task"], "pressure");
    assert_eq!(manifest["partial"], false);
    assert_eq!(manifest["rows"], 2);
    assert_eq!(manifest["results"], "pressure-results.csv");
    assert_eq!(manifest["config"]["system"], "full-2");
}

#[test]
fn misspelled_config_keys_are_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "pressure", "sistem": "full-2", "schedule": {"n": [4]}}"#,
    );
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sistem"), "stderr: {}", stderr(&out));
}

#[test]
fn a_missing_required_field_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"task": "pressure", "system": "full-2", "schedule": {"n": [4]}}"#,
    );
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("potential"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn schedule_caps_are_enforced_with_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "pressure",
            "system": "full-2",
            "potential": {"constant": 0.0},
            "schedule": {"n": [40], "m": 0}
        }"#,
    );
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schedule.n"));
}

#[test]
fn list_builtins_prints_the_closed_form_reference_values() {
    let out = run(&["list-builtins"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("full-2"));
    assert!(text.contains("two-sided-full-2"));
    assert!(text.contains("0.693147180560"));
    let golden = text.lines().find(|l| l.contains("golden-mean")).unwrap();
    assert!(golden.contains("0.481211825060"));
    let cantor = text.lines().find(|l| l.contains("middle-third")).unwrap();
    assert!(cantor.contains("0.630929753571"));
    assert!(text.contains("catmap-surrogate"));
}

#[test]
fn fair_coin_entropy_gives_one_row_matching_its_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "entropy",
            "measure": "bernoulli-half",
            "schedule": {"n": [500], "m": 0},
            "seeds": [0, 1, 2, 3]
        }"#,
    );
    let out = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let rows = csv_rows(&dir.path().join("entropy-results.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][5], rows[0][6], "value and oracle agree to print precision");
    assert_eq!(rows[0][6], "6.93147180560e-1");
    let diff: f64 = rows[0][7].parse().unwrap();
    assert!(diff < 1e-12);
}

#[test]
fn skewed_coin_counting_estimate_lands_near_its_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "sp",
            "system": "full-2",
            "potential": {"constant": 0.0},
            "measure": "bernoulli-09",
            "schedule": {"n": [6, 10, 14, 18], "m": 1, "theta": 0.05, "depth": 1}
        }"#,
    );
    let out = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let rows = csv_rows(&dir.path().join("sp-results.csv"));
    assert_eq!(rows.len(), 4);
    let oracle: f64 = rows[0][4].parse().unwrap();
    assert!((oracle - 0.325083).abs() < 1e-6);
    let final_diff: f64 = rows[3][5].parse().unwrap();
    assert!(final_diff <= 0.08, "final diff {final_diff}");
}

#[test]
fn a_numerical_failure_keeps_partial_rows_and_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "sp",
            "system": "full-2",
            "potential": {"constant": 0.0},
            "measure": "bernoulli-half",
            "schedule": {"n": [3], "m": 0, "theta": 1e-6, "depth": 1}
        }"#,
    );
    let out = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("flagged"));
    let rows = csv_rows(&dir.path().join("sp-results.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3], "-inf");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sp-manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["partial"], true);
}

#[test]
fn the_thread_count_does_not_change_the_results_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "lemma-check",
            "schedule": {"k": [2, 3], "n_max": 10, "delta_step": 0.1}
        }"#,
    );
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    for (threads, out_dir) in [("1", &one), ("4", &four)] {
        let out = run(&[
            "run",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--threads",
            threads,
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let a = fs::read(one.join("lemma-check-results.csv")).unwrap();
    let b = fs::read(four.join("lemma-check-results.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn the_env_var_sets_the_worker_count_when_no_flag_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "task": "dimension",
            "model": "middle-third",
            "measures": ["bernoulli-half"]
        }"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_shiftpress"))
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .env("SHIFTPRESS_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("dimension-manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["threads"], 3);
}
