pub mod compare;
pub mod extract;
pub mod rsd;
pub mod simulate;

use std::fs;
use std::path::Path;

use egfet_core::data_io::{read_drain_family, read_gate_sweep_with_summary, write_atomic, DataError};
use egfet_core::{DrainSweepFamily, GateSweep};

use crate::error::CliError;

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| {
        CliError::Output(DataError::Io {
            path: dir.to_path_buf(),
            source,
        })
    })
}

pub fn shown(path: &Path) -> String {
    path.display().to_string()
}

pub fn load_gate(path: &Path) -> Result<GateSweep, CliError> {
    let (sweep, summary) = read_gate_sweep_with_summary(path).map_err(CliError::Input)?;
    if summary.dropped > 0 {
        eprintln!(
            "warning: {}: dropped {} row(s) with negative or non-finite current",
            shown(path),
            summary.dropped
        );
    }
    Ok(sweep)
}

pub fn load_family(path: &Path) -> Result<DrainSweepFamily, CliError> {
    read_drain_family(path).map_err(CliError::Input)
}

/// Pretty JSON, newline-terminated, written atomically.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    text.push('\n');
    write_atomic(path, text.as_bytes()).map_err(CliError::Output)
}

/// Finite numbers as JSON numbers, anything else as `null`.
pub fn num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub fn opt_num(v: Option<f64>) -> serde_json::Value {
    v.map_or(serde_json::Value::Null, num)
}

pub fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.prec$}"),
        _ => "-".into(),
    }
}
