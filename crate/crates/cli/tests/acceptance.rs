//! Command line leg of the determinism acceptance gate: running the same
//! config twice, at different thread counts, must reproduce the results
//! table byte for byte.

use std::fs;
use std::path::Path;
use std::process::Command;

fn run(cfg: &Path, out_dir: &Path, threads: &str) {
    let out = Command::new(env!("CARGO_BIN_EXE_shiftpress"))
        .args([
            "run",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--threads",
            threads,
        ])
        .env_remove("SHIFTPRESS_THREADS")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn criterion_8_cli_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(
        &cfg,
        r#"{
            "task": "pointwise",
            "model": "ratios-half-quarter",
            "measure": "mix-half-quarter",
            "schedule": {"depths": [5, 10, 20], "orbit_len": 64},
            "seeds": [0, 1, 2, 3, 4, 5, 6, 7]
        }"#,
    )
    .unwrap();

    let mut tables = Vec::new();
    for (label, threads) in [("a", "1"), ("b", "4"), ("c", "2")] {
        let out_dir = dir.path().join(label);
        run(&cfg, &out_dir, threads);
        tables.push(fs::read(out_dir.join("pointwise-results.csv")).unwrap());
    }
    let ok = tables[0] == tables[1] && tables[1] == tables[2];
    println!(
        "acceptance 8 (cli byte-identical reruns): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}
