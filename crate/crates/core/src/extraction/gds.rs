//! Drain-conductance method on a family of drain sweeps.

use super::{
    check_r_sd, Estimate, ExtractOptions, ExtractionError, ExtractionReport, Method,
};
use crate::model::DeviceSpec;
use crate::numerics::{first_derivative, fit_line, ols, SampledCurve};
use crate::sweep::DrainSweepFamily;

/// Currents of every sweep on one shared `V_ds` grid.
struct CommonGrid {
    v_ds: Vec<f64>,
    /// `currents[j][k]`: sweep `j` at `v_ds[k]`.
    currents: Vec<Vec<f64>>,
    resampled: bool,
}

fn common_grid(family: &DrainSweepFamily) -> Result<CommonGrid, ExtractionError> {
    let sweeps = family.sweeps();
    let first = sweeps[0].v_ds();
    if sweeps.iter().all(|s| s.v_ds() == first) {
        return Ok(CommonGrid {
            v_ds: first.to_vec(),
            currents: sweeps.iter().map(|s| s.i_ds().to_vec()).collect(),
            resampled: false,
        });
    }
    let lo = sweeps.iter().map(|s| s.v_ds()[0]).fold(f64::NEG_INFINITY, f64::max);
    let hi = sweeps
        .iter()
        .map(|s| s.v_ds()[s.len() - 1])
        .fold(f64::INFINITY, f64::min);
    let grid: Vec<f64> = first.iter().copied().filter(|&v| v >= lo && v <= hi).collect();
    if grid.len() < 3 {
        return Err(ExtractionError::NoCommonDrainGrid);
    }
    let currents = sweeps
        .iter()
        .map(|s| {
            let c = SampledCurve::sparse(s.v_ds().to_vec(), s.i_ds().to_vec())?;
            grid.iter()
                .map(|&v| c.interpolate(v).ok_or(ExtractionError::NoCommonDrainGrid))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, ExtractionError>>()?;
    Ok(CommonGrid {
        v_ds: grid,
        currents,
        resampled: true,
    })
}

/// Fits `g_ds/sqrt(∂g_ds/∂V_gs)` against `V_gs` at every `V_ds` of the family
/// grid; one report per slice. The x-intercept is `V_T` and `slope² = β_0`.
///
/// `g_ds` is differenced along each drain sweep and its gate derivative
/// across sweeps, so the family needs at least three gate voltages. Slices
/// that fail are listed in the diagnostics of the others; if every slice
/// fails the first error is returned.
pub fn gds_method_extract(
    family: &DrainSweepFamily,
    spec: &DeviceSpec,
    r_sd: f64,
    opts: &ExtractOptions,
) -> Result<Vec<ExtractionReport>, ExtractionError> {
    check_r_sd(r_sd)?;
    if family.len() < 3 {
        return Err(ExtractionError::InsufficientGateValues {
            needed: 3,
            got: family.len(),
        });
    }
    let grid = common_grid(family)?;
    if grid.v_ds.len() < 3 {
        return Err(ExtractionError::NoCommonDrainGrid);
    }
    let v_gs = family.gate_voltages();
    let gds: Vec<Vec<f64>> = grid
        .currents
        .iter()
        .map(|i| {
            let c = SampledCurve::new(grid.v_ds.clone(), i.clone())?;
            Ok(first_derivative(&c)?.y().to_vec())
        })
        .collect::<Result<_, ExtractionError>>()?;

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (k, &v_ds) in grid.v_ds.iter().enumerate() {
        let currents: Vec<f64> = grid.currents.iter().map(|c| c[k]).collect();
        let g: Vec<f64> = gds.iter().map(|row| row[k]).collect();
        match slice_report(family.label(), spec, r_sd, opts, &v_gs, &g, &currents, v_ds) {
            Ok(r) => reports.push(r),
            Err(e) => failures.push((v_ds, e)),
        }
    }
    if reports.is_empty() {
        return Err(failures.swap_remove(0).1);
    }

    let mut shared = Vec::new();
    if grid.resampled {
        shared.push("drain sweeps resampled onto a common V_ds grid by linear interpolation".to_owned());
    }
    shared.extend(
        failures
            .iter()
            .map(|(v, e)| format!("V_ds = {v:.4} V slice skipped: {e}")),
    );
    if reports.len() >= 2 {
        let x: Vec<f64> = reports.iter().map(|r| r.v_ds).collect();
        let y: Vec<f64> = reports.iter().map(|r| r.v_t.value).collect();
        if let Ok(drift) = ols(&x, &y) {
            shared.push(format!(
                "V_T drift across {} V_ds slices: {:.3} mV per V of V_ds",
                reports.len(),
                drift.slope * 1e3
            ));
        }
    }
    for r in &mut reports {
        r.diagnostics.extend(shared.iter().cloned());
    }
    Ok(reports)
}

#[allow(clippy::too_many_arguments)]
fn slice_report(
    label: &str,
    spec: &DeviceSpec,
    r_sd: f64,
    opts: &ExtractOptions,
    v_gs: &[f64],
    g: &[f64],
    currents: &[f64],
    v_ds: f64,
) -> Result<ExtractionReport, ExtractionError> {
    let g_curve = SampledCurve::new(v_gs.to_vec(), g.to_vec())?;
    let dg = first_derivative(&g_curve)?;
    let mut diagnostics = Vec::new();

    let in_window = |v: f64| opts.window.is_none_or(|(lo, hi)| v >= lo && v <= hi);
    let mut keep = Vec::new();
    for j in 0..v_gs.len() {
        if !in_window(v_gs[j]) {
            continue;
        }
        if g[j] > 0.0 && dg.y()[j] > 0.0 {
            keep.push(j);
        } else {
            diagnostics.push(format!(
                "V_gs = {:.4} V excluded: non-positive g_ds or dg_ds/dV_gs",
                v_gs[j]
            ));
        }
    }
    if keep.len() < 3 {
        return Err(ExtractionError::NonpositiveDerivative { usable: keep.len() });
    }
    let h: Vec<f64> = keep.iter().map(|&j| g[j] / dg.y()[j].sqrt()).collect();
    let xs: Vec<f64> = keep.iter().map(|&j| v_gs[j]).collect();
    let linearized = SampledCurve::new(xs, h)?;
    let fit = fit_line(&linearized, 0..linearized.len())?;
    if !(fit.slope > 0.0) {
        return Err(ExtractionError::NonpositiveSlope);
    }

    let v_t = fit.x_intercept;
    let beta = fit.slope * fit.slope;
    let mu_0 = beta / spec.cox_aspect();
    let mu_sigma = 2.0 * mu_0 * fit.slope_sigma / fit.slope;
    let r_s = r_sd / 2.0;

    // θ from 1/g_ds = 1/(β0(V_gs−V_T)) + (θ + β0R_sd)/β0
    let (mut tx, mut ty, mut my) = (Vec::new(), Vec::new(), Vec::new());
    for &j in &keep {
        let u = v_gs[j] - v_t;
        if u <= 0.0 {
            diagnostics.push(format!("V_gs = {:.4} V at or below extracted V_T; no theta", v_gs[j]));
            continue;
        }
        let theta = beta / g[j] - 1.0 / u - beta * r_sd;
        tx.push(v_gs[j]);
        ty.push(theta);
        my.push(mu_0 / (1.0 + theta * (v_gs[j] - currents[j] * r_s - v_t)));
    }

    let mut report = ExtractionReport::new(
        Method::GdsMethod,
        label,
        v_ds,
        Estimate::with_sigma(v_t, fit.x_intercept_sigma),
        r_sd,
    );
    report.mu_0 = Some(Estimate::with_sigma(mu_0, mu_sigma));
    report.set_theta(
        SampledCurve::sparse(tx.clone(), ty)?,
        SampledCurve::sparse(tx, my)?,
    );
    report.fit = Some(fit);
    report.linearized = Some(linearized);
    report.diagnostics = diagnostics;
    Ok(report)
}
