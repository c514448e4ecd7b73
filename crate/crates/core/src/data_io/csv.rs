//! `#`-metadata CSV sweep files.
//!
//! ```text
//! # kind=gate_sweep
//! # v_ds=4.0000000000000000e-1
//! # label=DI water
//! # units=V,A
//! v_gs,i_ds
//! 0.0000000000000000e0,0.0000000000000000e0
//! ```
//!
//! The fixed bias (`v_ds` for gate sweeps, `v_gs` for single drain sweeps) is
//! expressed in the voltage unit declared by `units`. Drain families are
//! either one long file with columns `v_gs,v_ds,i_ds` or a directory holding
//! one `v_ds,i_ds` file per gate voltage.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{format_scaled, parse_scaled, write_atomic, DataError};
use crate::sweep::{DrainSweep, DrainSweepFamily, GateSweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    GateSweep,
    DrainSweep,
}

impl SweepKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "gate_sweep" => Some(SweepKind::GateSweep),
            "drain_sweep" => Some(SweepKind::DrainSweep),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoltageUnit {
    V,
    MilliV,
}

impl VoltageUnit {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "V" => Some(VoltageUnit::V),
            "mV" => Some(VoltageUnit::MilliV),
            _ => None,
        }
    }

    /// Decimal exponent taking a value in this unit to volts.
    pub fn exponent(self) -> i32 {
        match self {
            VoltageUnit::V => 0,
            VoltageUnit::MilliV => -3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentUnit {
    A,
    MilliA,
    MicroA,
    NanoA,
}

impl CurrentUnit {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" => Some(CurrentUnit::A),
            "mA" => Some(CurrentUnit::MilliA),
            "uA" | "µA" | "μA" => Some(CurrentUnit::MicroA),
            "nA" => Some(CurrentUnit::NanoA),
            _ => None,
        }
    }

    /// Decimal exponent taking a value in this unit to amperes.
    pub fn exponent(self) -> i32 {
        match self {
            CurrentUnit::A => 0,
            CurrentUnit::MilliA => -3,
            CurrentUnit::MicroA => -6,
            CurrentUnit::NanoA => -9,
        }
    }
}

/// Row bookkeeping from a read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReadSummary {
    /// Data rows kept.
    pub rows: usize,
    /// Rows dropped for a negative or non-finite current.
    pub dropped: usize,
}

struct RawFile {
    path: PathBuf,
    meta: Vec<(usize, String, String)>,
    header: Vec<String>,
    header_line: usize,
    rows: Vec<(usize, Vec<String>)>,
}

impl RawFile {
    fn load(path: &Path) -> Result<Self, DataError> {
        let text = fs::read_to_string(path).map_err(|e| DataError::io(path, e))?;
        Self::parse(path, &text)
    }

    fn parse(path: &Path, text: &str) -> Result<Self, DataError> {
        let mut meta = Vec::new();
        let mut header = None;
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let n = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    meta.push((n, k.trim().to_owned(), v.trim().to_owned()));
                }
                continue;
            }
            let cells: Vec<String> = line.split(',').map(|c| c.trim().to_owned()).collect();
            if header.is_none() {
                header = Some((n, cells));
            } else {
                rows.push((n, cells));
            }
        }
        let (header_line, header) = header.ok_or_else(|| DataError::Parse {
            path: path.to_path_buf(),
            line: text.lines().count().max(1),
            message: "no column header row".into(),
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            meta,
            header,
            header_line,
            rows,
        })
    }

    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.meta
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(n, _, v)| (*n, v.as_str()))
    }

    fn notes(&self) -> Vec<String> {
        self.meta
            .iter()
            .filter(|(_, k, _)| k == "note")
            .map(|(_, _, v)| v.clone())
            .collect()
    }

    fn err(&self, line: usize, message: impl Into<String>) -> DataError {
        DataError::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn kind(&self) -> Result<SweepKind, DataError> {
        let (n, v) = self.get("kind").ok_or(DataError::MissingMetadata {
            path: self.path.clone(),
            key: "kind",
        })?;
        SweepKind::parse(v).ok_or_else(|| self.err(n, format!("unknown sweep kind {v:?}")))
    }

    /// Declared units: voltage units for the leading columns, then current.
    fn units(&self, voltages: usize) -> Result<(Vec<VoltageUnit>, CurrentUnit), DataError> {
        let Some((n, v)) = self.get("units") else {
            return Ok((vec![VoltageUnit::V; voltages], CurrentUnit::A));
        };
        let parts: Vec<&str> = v.split(',').map(str::trim).collect();
        if parts.len() != voltages + 1 {
            return Err(self.err(n, format!("expected {} units, got {v:?}", voltages + 1)));
        }
        let volts = parts[..voltages]
            .iter()
            .map(|u| VoltageUnit::parse(u).ok_or_else(|| self.err(n, format!("unsupported voltage unit {u:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let amps = CurrentUnit::parse(parts[voltages])
            .ok_or_else(|| self.err(n, format!("unsupported current unit {:?}", parts[voltages])))?;
        Ok((volts, amps))
    }

    fn fixed_bias(&self, key: &'static str, unit: VoltageUnit) -> Result<f64, DataError> {
        let (n, v) = self.get(key).ok_or(DataError::MissingMetadata {
            path: self.path.clone(),
            key,
        })?;
        match parse_scaled(v, unit.exponent()) {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(self.err(n, format!("bad {key} value {v:?}"))),
        }
    }

    fn expect_header(&self, columns: &[&str]) -> Result<(), DataError> {
        if self.header.iter().map(String::as_str).eq(columns.iter().copied()) {
            Ok(())
        } else {
            Err(self.err(
                self.header_line,
                format!("expected header {:?}, got {:?}", columns.join(","), self.header.join(",")),
            ))
        }
    }

    /// Parses every data row into `shifts.len()` numbers.
    fn numbers(&self, shifts: &[i32]) -> Result<Vec<(usize, Vec<f64>)>, DataError> {
        self.rows
            .iter()
            .map(|(n, cells)| {
                if cells.len() != shifts.len() {
                    return Err(self.err(*n, format!("expected {} fields, got {}", shifts.len(), cells.len())));
                }
                let values = cells
                    .iter()
                    .zip(shifts)
                    .map(|(c, &s)| parse_scaled(c, s).ok_or_else(|| self.err(*n, format!("not a number: {c:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((*n, values))
            })
            .collect()
    }
}

/// Drops rows whose last value (the current) is negative or non-finite and
/// rejects non-finite voltages.
fn screen_rows(file: &RawFile, rows: Vec<(usize, Vec<f64>)>, summary: &mut ReadSummary) -> Result<Vec<(usize, Vec<f64>)>, DataError> {
    let mut kept = Vec::with_capacity(rows.len());
    for (n, v) in rows {
        let (i, volts) = v.split_last().expect("non-empty row");
        if let Some(bad) = volts.iter().find(|x| !x.is_finite()) {
            return Err(file.err(n, format!("non-finite voltage {bad}")));
        }
        if !i.is_finite() || *i < 0.0 {
            summary.dropped += 1;
            continue;
        }
        kept.push((n, v));
    }
    summary.rows += kept.len();
    Ok(kept)
}

fn check_increasing(file: &RawFile, lines: &[usize], x: &[f64]) -> Result<(), DataError> {
    match x.windows(2).position(|w| !(w[1] > w[0])) {
        Some(k) => Err(DataError::NonMonotoneGrid {
            path: file.path.clone(),
            line: lines[k + 1],
        }),
        None => Ok(()),
    }
}

fn warn_dropped(path: &Path, summary: &ReadSummary) {
    if summary.dropped > 0 {
        log::warn!(
            "{}: dropped {} row(s) with negative or non-finite current",
            path.display(),
            summary.dropped
        );
    }
}

fn default_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn read_gate_sweep(path: impl AsRef<Path>) -> Result<GateSweep, DataError> {
    read_gate_sweep_with_summary(path).map(|(s, _)| s)
}

/// Reads a gate sweep and reports how many rows were dropped.
pub fn read_gate_sweep_with_summary(path: impl AsRef<Path>) -> Result<(GateSweep, ReadSummary), DataError> {
    let path = path.as_ref();
    let file = RawFile::load(path)?;
    if file.kind()? != SweepKind::GateSweep {
        let (n, _) = file.get("kind").expect("kind checked");
        return Err(file.err(n, "expected kind=gate_sweep"));
    }
    let (volts, amps) = file.units(1)?;
    let v_ds = file.fixed_bias("v_ds", volts[0])?;
    file.expect_header(&["v_gs", "i_ds"])?;
    let mut summary = ReadSummary::default();
    let rows = file.numbers(&[volts[0].exponent(), amps.exponent()])?;
    let rows = screen_rows(&file, rows, &mut summary)?;
    let lines: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let v_gs: Vec<f64> = rows.iter().map(|r| r.1[0]).collect();
    let i_ds: Vec<f64> = rows.iter().map(|r| r.1[1]).collect();
    check_increasing(&file, &lines, &v_gs)?;
    warn_dropped(path, &summary);
    let label = file.get("label").map_or_else(|| default_label(path), |(_, l)| l.to_owned());
    let sweep = GateSweep::new(label, v_ds, v_gs, i_ds)
        .map_err(|source| DataError::InvalidSweep {
            path: path.to_path_buf(),
            source,
        })?
        .with_notes(file.notes());
    Ok((sweep, summary))
}

fn one_line(s: &str) -> String {
    s.replace(['\r', '\n'], " ")
}

fn gate_sweep_text(sweep: &GateSweep) -> String {
    let mut out = String::new();
    out.push_str("# kind=gate_sweep\n");
    let _ = writeln!(out, "# v_ds={}", format_scaled(sweep.v_ds(), 0));
    let _ = writeln!(out, "# label={}", one_line(sweep.label()));
    out.push_str("# units=V,A\n");
    for n in sweep.notes() {
        let _ = writeln!(out, "# note={}", one_line(n));
    }
    out.push_str("v_gs,i_ds\n");
    for (v, i) in sweep.points() {
        let _ = writeln!(out, "{},{}", format_scaled(v, 0), format_scaled(i, 0));
    }
    out
}

pub fn write_gate_sweep(sweep: &GateSweep, path: impl AsRef<Path>) -> Result<(), DataError> {
    write_atomic(path.as_ref(), gate_sweep_text(sweep).as_bytes())
}

struct Group {
    v_gs: f64,
    origin: String,
    lines: Vec<usize>,
    v_ds: Vec<f64>,
    i_ds: Vec<f64>,
}

fn groups_from_file(file: &RawFile, summary: &mut ReadSummary) -> Result<Vec<Group>, DataError> {
    if file.kind()? != SweepKind::DrainSweep {
        let (n, _) = file.get("kind").expect("kind checked");
        return Err(file.err(n, "expected kind=drain_sweep"));
    }
    let origin = file.path.display().to_string();
    if file.header.first().map(String::as_str) == Some("v_gs") {
        let (volts, amps) = file.units(2)?;
        file.expect_header(&["v_gs", "v_ds", "i_ds"])?;
        let rows = file.numbers(&[volts[0].exponent(), volts[1].exponent(), amps.exponent()])?;
        let rows = screen_rows(file, rows, summary)?;
        let mut groups: Vec<Group> = Vec::new();
        for (n, v) in rows {
            match groups.last_mut() {
                Some(g) if g.v_gs == v[0] => {
                    g.lines.push(n);
                    g.v_ds.push(v[1]);
                    g.i_ds.push(v[2]);
                }
                _ => {
                    if groups.iter().any(|g| g.v_gs == v[0]) {
                        return Err(DataError::InconsistentFamily(format!(
                            "{origin}:{n}: rows for V_gs = {} V are not contiguous",
                            v[0]
                        )));
                    }
                    groups.push(Group {
                        v_gs: v[0],
                        origin: format!("{origin}:{n}"),
                        lines: vec![n],
                        v_ds: vec![v[1]],
                        i_ds: vec![v[2]],
                    });
                }
            }
        }
        for g in &groups {
            check_increasing(file, &g.lines, &g.v_ds)?;
        }
        Ok(groups)
    } else {
        let (volts, amps) = file.units(1)?;
        let v_gs = file.fixed_bias("v_gs", volts[0])?;
        file.expect_header(&["v_ds", "i_ds"])?;
        let rows = file.numbers(&[volts[0].exponent(), amps.exponent()])?;
        let rows = screen_rows(file, rows, summary)?;
        let lines: Vec<usize> = rows.iter().map(|r| r.0).collect();
        let v_ds: Vec<f64> = rows.iter().map(|r| r.1[0]).collect();
        check_increasing(file, &lines, &v_ds)?;
        Ok(vec![Group {
            v_gs,
            origin,
            lines,
            v_ds,
            i_ds: rows.iter().map(|r| r.1[1]).collect(),
        }])
    }
}

/// Reads a drain family from one long-format file or from a directory of
/// `*.csv` files (read in name order).
pub fn read_drain_family(path: impl AsRef<Path>) -> Result<DrainSweepFamily, DataError> {
    let path = path.as_ref();
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| DataError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "csv"))
            .collect();
        v.sort();
        if v.is_empty() {
            return Err(DataError::InconsistentFamily(format!(
                "{}: no .csv files in directory",
                path.display()
            )));
        }
        v
    } else {
        vec![path.to_path_buf()]
    };

    let mut summary = ReadSummary::default();
    let mut groups: Vec<Group> = Vec::new();
    let mut label = None;
    let mut notes = Vec::new();
    for f in &files {
        let raw = RawFile::load(f)?;
        if label.is_none() {
            label = raw.get("label").map(|(_, l)| l.to_owned());
        }
        notes.extend(raw.notes());
        for g in groups_from_file(&raw, &mut summary)? {
            if let Some(prev) = groups.iter().find(|p| p.v_gs == g.v_gs) {
                return Err(DataError::InconsistentFamily(format!(
                    "V_gs = {} V appears in both {} and {}",
                    g.v_gs, prev.origin, g.origin
                )));
            }
            groups.push(g);
        }
    }
    warn_dropped(path, &summary);

    let sweeps = groups
        .into_iter()
        .map(|g| {
            let origin = PathBuf::from(&g.origin);
            DrainSweep::new(g.v_gs, g.v_ds, g.i_ds)
                .map_err(|source| DataError::InvalidSweep { path: origin, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let label = label.unwrap_or_else(|| default_label(path));
    DrainSweepFamily::new(label, sweeps)
        .map(|f| f.with_notes(notes))
        .map_err(|e| DataError::InconsistentFamily(e.to_string()))
}

/// Writes a drain family as one long-format file.
pub fn write_drain_family(family: &DrainSweepFamily, path: impl AsRef<Path>) -> Result<(), DataError> {
    let mut out = String::new();
    out.push_str("# kind=drain_sweep\n");
    let _ = writeln!(out, "# label={}", one_line(family.label()));
    out.push_str("# units=V,V,A\n");
    for n in family.notes() {
        let _ = writeln!(out, "# note={}", one_line(n));
    }
    out.push_str("v_gs,v_ds,i_ds\n");
    for s in family.sweeps() {
        let vg = format_scaled(s.v_gs(), 0);
        for (v, i) in s.v_ds().iter().zip(s.i_ds()) {
            let _ = writeln!(out, "{vg},{},{}", format_scaled(*v, 0), format_scaled(*i, 0));
        }
    }
    write_atomic(path.as_ref(), out.as_bytes())
}

/// Writes one `v_ds,i_ds` file per gate voltage into `dir` (created if
/// missing) and returns the paths in gate-voltage order.
pub fn write_drain_family_split(family: &DrainSweepFamily, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, DataError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| DataError::io(dir, e))?;
    let mut paths = Vec::new();
    for (k, s) in family.sweeps().iter().enumerate() {
        let mut out = String::new();
        out.push_str("# kind=drain_sweep\n");
        let _ = writeln!(out, "# v_gs={}", format_scaled(s.v_gs(), 0));
        let _ = writeln!(out, "# label={}", one_line(family.label()));
        out.push_str("# units=V,A\n");
        if k == 0 {
            for n in family.notes() {
                let _ = writeln!(out, "# note={}", one_line(n));
            }
        }
        out.push_str("v_ds,i_ds\n");
        for (v, i) in s.v_ds().iter().zip(s.i_ds()) {
            let _ = writeln!(out, "{},{}", format_scaled(*v, 0), format_scaled(*i, 0));
        }
        let p = dir.join(format!("vgs_{k:03}.csv"));
        write_atomic(&p, out.as_bytes())?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn two_row_file_round_trips_byte_for_byte() {
        let dir = tempfile::tempdir().unwrap();
        let body = "# kind=gate_sweep\n# v_ds=4.0000000000000000e-1\n# label=DI water\n# units=V,A\n\
                    v_gs,i_ds\n1.0000000000000000e0,0.0000000000000000e0\n2.0000000000000000e0,3.1400000000000000e-5\n";
        let src = write(dir.path(), "in.csv", body);
        let s = read_gate_sweep(&src).unwrap();
        assert_eq!(s.label(), "DI water");
        assert_eq!(s.v_ds(), 0.4);
        let dst = dir.path().join("out.csv");
        write_gate_sweep(&s, &dst).unwrap();
        assert_eq!(fs::read_to_string(&dst).unwrap(), body);
    }

    #[test]
    fn milliamp_column_is_scaled_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "# kind=gate_sweep\n# v_ds=400\n# units=mV,mA\nv_gs,i_ds\n1000,0\n2000,0.0314\n",
        );
        let s = read_gate_sweep(&p).unwrap();
        assert_eq!(s.i_ds(), &[0.0, 3.14e-5]);
        assert_eq!(s.v_gs(), &[1.0, 2.0]);
        assert_eq!(s.v_ds(), 0.4);
        assert_eq!(s.label(), "a");
    }

    #[test]
    fn forty_one_row_grid() {
        let dir = tempfile::tempdir().unwrap();
        let mut body = String::from("# kind=gate_sweep\n# v_ds=0.4\nv_gs,i_ds\n");
        for k in 0..41 {
            let _ = writeln!(body, "{:.1},{}", k as f64 * 0.1, k as f64 * 1e-6);
        }
        let s = read_gate_sweep(write(dir.path(), "g.csv", &body)).unwrap();
        assert_eq!(s.len(), 41);
        assert_eq!(s.v_gs()[40], 4.0);
    }

    #[test]
    fn bad_rows_are_dropped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "a.csv",
            "# kind=gate_sweep\n# v_ds=0.4\nv_gs,i_ds\n0,1e-9\n0.1,-1e-12\n0.2,NaN\n0.3,inf\n0.4,2e-9\n",
        );
        let (s, summary) = read_gate_sweep_with_summary(&p).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(summary, ReadSummary { rows: 2, dropped: 3 });
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.csv", "# kind=gate_sweep\n# v_ds=0.4\nv_gs,i_ds\n0,1\n0.1,x\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::Parse { line: 5, .. })));
        let p = write(dir.path(), "b.csv", "# kind=gate_sweep\nv_gs,i_ds\n0,1\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::MissingMetadata { key: "v_ds", .. })));
        let p = write(dir.path(), "c.csv", "# v_ds=0.4\nv_gs,i_ds\n0,1\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::MissingMetadata { key: "kind", .. })));
        let p = write(dir.path(), "d.csv", "# kind=gate_sweep\n# v_ds=0.4\nv_gs,i_ds\n0,1\n0.2,1\n0.1,1\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::NonMonotoneGrid { line: 6, .. })));
        let p = write(dir.path(), "e.csv", "# kind=gate_sweep\n# v_ds=0.4\n# units=kV,A\nv_gs,i_ds\n0,1\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::Parse { line: 3, .. })));
        let p = write(dir.path(), "f.csv", "# kind=gate_sweep\n# v_ds=0.4\nv_gs,i_ds\n0,1,2\n");
        assert!(matches!(read_gate_sweep(&p), Err(DataError::Parse { line: 4, .. })));
    }

    const LONG: &str = "# kind=drain_sweep\n# label=fam\n# units=V,V,A\nv_gs,v_ds,i_ds\n\
                        2,0,0\n2,0.1,1e-6\n2,0.2,2e-6\n3,0,0\n3,0.1,2e-6\n3,0.2,4e-6\n\
                        4,0,0\n4,0.1,3e-6\n4,0.2,6e-6\n";

    #[test]
    fn long_format_family() {
        let dir = tempfile::tempdir().unwrap();
        let fam = read_drain_family(write(dir.path(), "f.csv", LONG)).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.gate_voltages(), vec![2.0, 3.0, 4.0]);
        assert_eq!(fam.label(), "fam");
    }

    #[test]
    fn split_and_long_formats_agree() {
        let dir = tempfile::tempdir().unwrap();
        let fam = read_drain_family(write(dir.path(), "f.csv", LONG)).unwrap();
        let split = dir.path().join("split");
        let paths = write_drain_family_split(&fam, &split).unwrap();
        assert_eq!(paths.len(), 3);
        assert_eq!(read_drain_family(&split).unwrap(), fam);
        let long = dir.path().join("long.csv");
        write_drain_family(&fam, &long).unwrap();
        assert_eq!(read_drain_family(&long).unwrap(), fam);
    }

    #[test]
    fn duplicate_gate_voltage_is_inconsistent() {
        let dir = tempfile::tempdir().unwrap();
        let per = "# kind=drain_sweep\n# v_gs=2\nv_ds,i_ds\n0,0\n0.1,1e-6\n";
        write(dir.path(), "a.csv", per);
        write(dir.path(), "b.csv", per);
        assert!(matches!(read_drain_family(dir.path()), Err(DataError::InconsistentFamily(_))));

        let split = "# kind=drain_sweep\nv_gs,v_ds,i_ds\n2,0,0\n3,0,0\n2,0.1,1e-6\n";
        let other = tempfile::tempdir().unwrap();
        let p = write(other.path(), "l.csv", split);
        assert!(matches!(read_drain_family(&p), Err(DataError::InconsistentFamily(_))));
    }
}
