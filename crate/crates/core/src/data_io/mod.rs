//! Sweep CSV files, JSON reports and SVG plots.
//!
//! Numbers are written with 17 significant digits: the shortest decimal that
//! reads back to the same `f64`, zero-padded. Unit conversions by powers of
//! ten are done on that decimal text rather than by floating-point
//! multiplication, so `0.0505` m²/(V·s) is written as exactly `505` cm²/(V·s)
//! and still reads back bit-identical.

mod csv;
mod report;
mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::sweep::SweepError;

pub use csv::{
    read_drain_family, read_gate_sweep, read_gate_sweep_with_summary, write_drain_family,
    write_drain_family_split, write_gate_sweep, CurrentUnit, ReadSummary, SweepKind,
    VoltageUnit,
};
pub use report::{read_report, report_from_json, report_to_json, write_report};
pub use svg::{emit_plot, render_svg, Figure, Panel, Series, SeriesStyle};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: missing metadata `{key}`")]
    MissingMetadata { path: PathBuf, key: &'static str },
    #[error("{path}:{line}: voltage grid is not strictly increasing")]
    NonMonotoneGrid { path: PathBuf, line: usize },
    #[error("inconsistent drain family: {0}")]
    InconsistentFamily(String),
    #[error("{path}: invalid sweep: {source}")]
    InvalidSweep {
        path: PathBuf,
        #[source]
        source: SweepError,
    },
    #[error("{path}: malformed report: {message}")]
    Report { path: PathBuf, message: String },
    #[error("nothing to plot: a panel has no data points")]
    EmptyPlot,
}

impl DataError {
    fn io(path: &Path, source: io::Error) -> Self {
        DataError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Writes `contents` to a temporary sibling of `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), DataError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| DataError::io(path, io::Error::new(io::ErrorKind::InvalidInput, "not a file path")))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(DataError::io(path, e));
    }
    Ok(())
}

/// Exponent-form text of `v · 10^shift` with 17 significant digits. The
/// digits are those of the shortest round-trip representation of `v`.
pub(crate) fn format_scaled(v: f64, shift: i32) -> String {
    let s = format!("{v:e}");
    let Some((mantissa, exp)) = s.split_once('e') else {
        return s;
    };
    let exp: i32 = exp.parse().expect("integer exponent");
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    format!("{int}.{frac:0<16}e{}", exp + shift)
}

/// Parses a decimal number and multiplies it by `10^shift` exactly (before
/// rounding to `f64`).
pub(crate) fn parse_scaled(text: &str, shift: i32) -> Option<f64> {
    let text = text.trim();
    if shift == 0 {
        return text.parse().ok();
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    if mantissa.is_empty() || !mantissa.bytes().all(|b| b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'+') {
        // inf/nan and friends carry no decimal exponent to shift
        return text.parse().ok();
    }
    format!("{mantissa}e{}", exp + shift).parse().ok()
}
