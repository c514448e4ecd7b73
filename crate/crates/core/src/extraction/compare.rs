//! Threshold-shift comparison across solutions.

use super::{ExtractionError, ExtractionReport, Method};

/// Threshold shift of one report against the reference of the same method.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftRow {
    pub method: Method,
    pub label: String,
    pub v_ds: f64,
    pub v_t: f64,
    pub v_t_reference: f64,
    /// `v_t − v_t_reference`; positive means the threshold increased.
    pub shift: f64,
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTable {
    pub reference: String,
    pub rows: Vec<ShiftRow>,
    pub diagnostics: Vec<String>,
}

fn same_bias(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

/// ΔV_T of every report relative to the report labelled `reference_label`
/// with the same method and drain bias. The reference rows themselves appear
/// with a zero shift.
pub fn compare_reports(
    reports: &[ExtractionReport],
    reference_label: &str,
) -> Result<ShiftTable, ExtractionError> {
    if reports.len() < 2 {
        return Err(ExtractionError::TooFewReports(reports.len()));
    }
    if !reports.iter().any(|r| r.label == reference_label) {
        return Err(ExtractionError::MissingReference(reference_label.to_owned()));
    }
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for r in reports {
        let reference = reports.iter().find(|q| {
            q.label == reference_label && q.method == r.method && same_bias(q.v_ds, r.v_ds)
        });
        let Some(reference) = reference else {
            diagnostics.push(format!(
                "{} ({}, V_ds = {} V): no reference report",
                r.label, r.method, r.v_ds
            ));
            continue;
        };
        let sigma = match (r.v_t.sigma, reference.v_t.sigma) {
            _ if std::ptr::eq(r, reference) => None,
            (Some(a), Some(b)) => Some(a.hypot(b)),
            _ => None,
        };
        rows.push(ShiftRow {
            method: r.method,
            label: r.label.clone(),
            v_ds: r.v_ds,
            v_t: r.v_t.value,
            v_t_reference: reference.v_t.value,
            shift: r.v_t.value - reference.v_t.value,
            sigma,
        });
    }
    rows.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.v_ds.total_cmp(&b.v_ds))
            .then((a.label != reference_label).cmp(&(b.label != reference_label)))
    });
    Ok(ShiftTable {
        reference: reference_label.to_owned(),
        rows,
        diagnostics,
    })
}
