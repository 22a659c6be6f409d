//! Command line front end: JSON experiment configs in, CSV tables and a
//! JSON run manifest out. All numerics live in the library crate; this
//! crate only parses, dispatches, and formats.

// Validation guards of the form `!(x > 0.0)` also catch NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod emit;
pub mod tasks;

use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad config or arguments. Exit code 2.
    #[error("{0}")]
    Validation(String),
    /// A computation failed or produced flagged values. Exit code 3.
    #[error("{0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

pub(crate) fn invalid(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{key}: {reason}"))
}

#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub rows: usize,
    /// Description of the numerical failure, when one occurred.
    pub failure: Option<String>,
}

/// Loads and validates the config, runs the task on a worker pool of
/// `threads` threads (0 = one per core), and writes the results table plus
/// the run manifest into `out_dir`. Partial results are still written when
/// the task fails midway; the manifest then carries `"partial": true`.
pub fn run_config(path: &Path, out_dir: &Path, threads: usize) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    let (echo, cfg) = config::load(path)?;
    let plan = config::plan(&cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid("threads", e))?;
    let out = tasks::execute(&plan, &pool);
    let prefix = cfg
        .output
        .as_ref()
        .map(|o| o.prefix.clone())
        .unwrap_or_else(|| cfg.task.name().to_string());
    let partial = out.failure.is_some();
    let manifest = emit::Manifest {
        task: cfg.task.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seeds: cfg.seeds.clone(),
        threads: pool.current_num_threads(),
        rows: out.table.len(),
        partial,
        results: format!("{prefix}-results.csv"),
        wall_ms: started.elapsed().as_millis() as u64,
        config: echo,
    };
    let (csv_path, manifest_path) =
        emit::write_outputs(out_dir, &prefix, &out.table.render(), &manifest)?;
    Ok(RunOutcome {
        exit_code: if out.failure.is_some() { 3 } else { 0 },
        csv_path,
        manifest_path,
        rows: out.table.len(),
        failure: out.failure,
    })
}

/// The builtin catalog as an aligned text listing.
pub fn render_catalog() -> String {
    let rows = shiftpress::builtins::catalog();
    let kind_w = rows.iter().map(|r| r.kind.len()).max().unwrap_or(0);
    let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for row in rows {
        text.push_str(&format!(
            "{:kind_w$}  {:name_w$}  {}\n",
            row.kind, row.name, row.summary
        ));
    }
    text
}
