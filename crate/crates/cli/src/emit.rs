//! Result emission: a CSV table with floats at twelve significant digits
//! and a JSON run manifest. Reruns of the same config produce byte
//! identical tables; only the manifest's wall time varies.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Twelve significant digits, scientific notation, so tables diff cleanly.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut text = String::new();
        text.push_str(&self.columns.join(","));
        text.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        text
    }
}

fn quote(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub task: String,
    pub version: String,
    pub seeds: Vec<u64>,
    pub threads: usize,
    pub rows: usize,
    pub partial: bool,
    pub results: String,
    pub wall_ms: u64,
    pub config: serde_json::Value,
}

pub fn write_outputs(
    dir: &Path,
    prefix: &str,
    csv_text: &str,
    manifest: &Manifest,
) -> io::Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{prefix}-results.csv"));
    let manifest_path = dir.join(format!("{prefix}-manifest.json"));
    fs::write(&csv_path, csv_text)?;
    let mut manifest_text = serde_json::to_string_pretty(manifest)?;
    manifest_text.push('\n');
    fs::write(&manifest_path, manifest_text)?;
    Ok((csv_path, manifest_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_print_twelve_significant_digits() {
        assert_eq!(fmt_float(core::f64::consts::LN_2), "6.93147180560e-1");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
        assert_eq!(fmt_float(-1.5e-12), "-1.50000000000e-12");
        assert_eq!(fmt_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn cells_with_commas_are_quoted() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec!["plain".into(), "with,comma".into()]);
        assert_eq!(t.render(), "a,b\nplain,\"with,comma\"\n");
    }
}
