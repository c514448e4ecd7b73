//! Gate-sweep methods: peak transconductance, `I_ds/sqrt(g_m)` and `1/I_ds`.

use std::ops::Range;

use super::{
    check_r_sd, fit_candidates, Estimate, ExtractOptions, ExtractionError, ExtractionReport,
    Method, PeakGmDetail, INV_IDS_DEFAULT_SMOOTHING, MIN_SWEEP_POINTS,
};
use crate::model::{Beta0, DeviceSpec};
use crate::numerics::{first_derivative, second_derivative, smooth, LineFit, SampledCurve};
use crate::sweep::GateSweep;

/// Relative tolerance under which two transconductance samples count as equal.
const PEAK_TIE: f64 = 1e-9;

fn sweep_curve(sweep: &GateSweep) -> Result<SampledCurve, ExtractionError> {
    if sweep.len() < MIN_SWEEP_POINTS {
        return Err(ExtractionError::TooFewPoints {
            needed: MIN_SWEEP_POINTS,
            got: sweep.len(),
        });
    }
    Ok(sweep.curve()?)
}

/// Index of the maximum, lowest index among near-equal maxima.
fn argmax_lowest(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = PEAK_TIE * max.abs();
    values.iter().position(|&v| v >= max - tol).unwrap_or(0)
}

/// Threshold from the tangent of `I_ds(V_gs)` at the transconductance peak.
///
/// Also reports the gate voltage where `∂g_m/∂V_gs` peaks as an alternative
/// estimate.
pub fn peak_gm_extract(sweep: &GateSweep) -> Result<ExtractionReport, ExtractionError> {
    let curve = sweep_curve(sweep)?;
    let gm = first_derivative(&curve)?;
    let k = argmax_lowest(gm.y());
    if k == 0 || k == curve.len() - 1 {
        return Err(ExtractionError::NoInteriorMax { v_gs: curve.x()[k] });
    }
    let (v_peak, i_peak, gm_peak) = (curve.x()[k], curve.y()[k], gm.y()[k]);
    let v_t = v_peak - i_peak / gm_peak;

    let dgm = second_derivative(&curve)?;
    let v_t_alt = dgm.x()[argmax_lowest(dgm.y())];

    let mut report = ExtractionReport::new(Method::PeakGm, sweep.label(), sweep.v_ds(), Estimate::exact(v_t), 0.0);
    report.peak = Some(PeakGmDetail {
        v_gs_peak: v_peak,
        g_m_peak: gm_peak,
        i_ds_peak: i_peak,
        v_t_max_dgm: Some(v_t_alt),
    });
    report.diagnostics.push(format!(
        "peak g_m at V_gs = {v_peak:.4} V; max dg_m/dV_gs at V_gs = {v_t_alt:.4} V"
    ));
    Ok(report)
}

/// Gate-voltage bounds for candidate fit points, and whether the window is automatic.
struct Region {
    lo: f64,
    hi: f64,
    auto: bool,
}

impl Region {
    fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }
}

fn fit_region(sweep: &GateSweep, opts: &ExtractOptions, diagnostics: &mut Vec<String>) -> Region {
    if let Some((lo, hi)) = opts.window {
        return Region { lo, hi, auto: false };
    }
    match peak_gm_extract(sweep) {
        Ok(peak) => Region {
            lo: peak.v_t.value + opts.threshold_margin,
            hi: f64::INFINITY,
            auto: true,
        },
        Err(e) => {
            diagnostics.push(format!(
                "peak-g_m threshold unavailable ({e}); automatic window searches all conducting points"
            ));
            Region {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                auto: true,
            }
        }
    }
}

fn slope_positive(fit: &LineFit) -> Result<(), ExtractionError> {
    if fit.slope > 0.0 && fit.slope.is_finite() {
        Ok(())
    } else {
        Err(ExtractionError::NonpositiveSlope)
    }
}

fn positive_v_ds(sweep: &GateSweep) -> Result<f64, ExtractionError> {
    let v_ds = sweep.v_ds();
    if v_ds > 0.0 {
        Ok(v_ds)
    } else {
        Err(ExtractionError::ZeroDrainBias)
    }
}

/// Effective mobility at each θ sample, using the measured current for the
/// `I_ds R_s` term.
fn mu_eff_curve(
    theta: &SampledCurve,
    currents: &[f64],
    mu_0: f64,
    v_t: f64,
    r_sd: f64,
) -> Result<SampledCurve, ExtractionError> {
    let r_s = r_sd / 2.0;
    let y = theta
        .points()
        .zip(currents)
        .map(|((v, th), &i)| mu_0 / (1.0 + th * (v - i * r_s - v_t)))
        .collect();
    Ok(SampledCurve::sparse(theta.x().to_vec(), y)?)
}

/// θ from the transconductance relation
/// `θ = [I_ds/(g_m(V_gs−V_T)) − 1]/(V_gs−V_T) − β_0 R_sd`, evaluated at the
/// sweep indices in `window`.
pub fn theta_from_eq12(
    sweep: &GateSweep,
    v_t: f64,
    beta0: Beta0,
    r_sd: f64,
    window: Range<usize>,
) -> Result<SampledCurve, ExtractionError> {
    check_r_sd(r_sd)?;
    let curve = sweep.curve()?;
    let gm = first_derivative(&curve)?;
    let idx: Vec<usize> = window.collect();
    theta_gm_points(&curve, gm.y(), &idx, v_t, beta0.value(), r_sd)
}

fn theta_gm_points(
    curve: &SampledCurve,
    gm: &[f64],
    idx: &[usize],
    v_t: f64,
    beta: f64,
    r_sd: f64,
) -> Result<SampledCurve, ExtractionError> {
    let mut x = Vec::with_capacity(idx.len());
    let mut y = Vec::with_capacity(idx.len());
    for &k in idx {
        let (v, i) = (curve.x()[k], curve.y()[k]);
        let u = v - v_t;
        if u <= 0.0 {
            return Err(ExtractionError::WindowBelowThreshold { v_t });
        }
        if gm[k] <= 0.0 {
            return Err(ExtractionError::NonpositiveGm { v_gs: v });
        }
        x.push(v);
        y.push((i / (gm[k] * u) - 1.0) / u - beta * r_sd);
    }
    Ok(SampledCurve::sparse(x, y)?)
}

/// θ from the inverse-current relation
/// `θ = β_0V_ds[1/I_ds − 1/(β_0V_ds(V_gs−V_T))] − β_0R_sd` at the sweep
/// indices in `window`.
pub fn theta_from_inverse_current(
    sweep: &GateSweep,
    v_t: f64,
    beta0: Beta0,
    r_sd: f64,
    window: Range<usize>,
) -> Result<SampledCurve, ExtractionError> {
    check_r_sd(r_sd)?;
    let idx: Vec<usize> = window.collect();
    theta_inv_points(sweep, &idx, v_t, beta0.value(), r_sd)
}

fn theta_inv_points(
    sweep: &GateSweep,
    idx: &[usize],
    v_t: f64,
    beta: f64,
    r_sd: f64,
) -> Result<SampledCurve, ExtractionError> {
    let bv = beta * sweep.v_ds();
    let mut x = Vec::with_capacity(idx.len());
    let mut y = Vec::with_capacity(idx.len());
    for &k in idx {
        let (v, i) = (sweep.v_gs()[k], sweep.i_ds()[k]);
        let u = v - v_t;
        if u <= 0.0 {
            return Err(ExtractionError::WindowBelowThreshold { v_t });
        }
        if i <= 0.0 {
            return Err(ExtractionError::NonpositiveCurrent { v_gs: v });
        }
        x.push(v);
        y.push(bv * (1.0 / i - 1.0 / (bv * u)) - beta * r_sd);
    }
    Ok(SampledCurve::sparse(x, y)?)
}

/// Maps indices of a sub-curve back to indices of the full sweep by gate voltage.
fn sweep_indices(sweep: &GateSweep, xs: &[f64]) -> Vec<usize> {
    let v = sweep.v_gs();
    xs.iter()
        .map(|x| v.partition_point(|a| a < x))
        .collect()
}

/// Fits `I_ds/sqrt(g_m)` against `V_gs`: the x-intercept is `V_T` and
/// `slope² = μ_0 C_ox (W/L) V_ds`.
pub fn ids_over_sqrt_gm_extract(
    sweep: &GateSweep,
    spec: &DeviceSpec,
    r_sd: f64,
    opts: &ExtractOptions,
) -> Result<ExtractionReport, ExtractionError> {
    check_r_sd(r_sd)?;
    let curve = sweep_curve(sweep)?;
    let v_ds = positive_v_ds(sweep)?;
    let gm = first_derivative(&curve)?;
    let mut diagnostics = Vec::new();
    let region = fit_region(sweep, opts, &mut diagnostics);

    let mut candidates = Vec::new();
    let mut skipped = 0usize;
    for k in 0..curve.len() {
        let (v, i, g) = (curve.x()[k], curve.y()[k], gm.y()[k]);
        if !region.contains(v) {
            continue;
        }
        if g > 0.0 && i > 0.0 {
            candidates.push(k);
        } else if !region.auto {
            return Err(if i <= 0.0 {
                ExtractionError::NonpositiveCurrent { v_gs: v }
            } else {
                ExtractionError::NonpositiveGm { v_gs: v }
            });
        } else if i > 0.0 {
            skipped += 1;
        }
    }
    if skipped > 0 {
        diagnostics.push(format!("excluded {skipped} conducting point(s) with non-positive g_m"));
    }

    let f_values: Vec<f64> = (0..curve.len())
        .map(|k| {
            let g = gm.y()[k];
            if g > 0.0 {
                curve.y()[k] / g.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let f_curve = SampledCurve::new(curve.x().to_vec(), f_values)?;
    let (linearized, fit) = fit_candidates(&f_curve, &candidates, opts, region.auto, &mut diagnostics)?;
    slope_positive(&fit)?;

    let v_t = fit.x_intercept;
    let beta = fit.slope * fit.slope / v_ds;
    let mu_0 = beta / spec.cox_aspect();
    let mu_sigma = 2.0 * mu_0 * fit.slope_sigma / fit.slope;

    let fit_idx = sweep_indices(sweep, &linearized.x()[fit.window.clone()]);
    let theta = theta_gm_points(&curve, gm.y(), &fit_idx, v_t, beta, r_sd)?;
    let currents: Vec<f64> = fit_idx.iter().map(|&k| curve.y()[k]).collect();
    let mu_eff = mu_eff_curve(&theta, &currents, mu_0, v_t, r_sd)?;

    let mut report = ExtractionReport::new(
        Method::IdsOverSqrtGm,
        sweep.label(),
        v_ds,
        Estimate::with_sigma(v_t, fit.x_intercept_sigma),
        r_sd,
    );
    report.mu_0 = Some(Estimate::with_sigma(mu_0, mu_sigma));
    report.set_theta(theta, mu_eff);
    report.fit = Some(fit);
    report.linearized = Some(linearized);
    report.diagnostics = diagnostics;
    Ok(report)
}

/// Fits `[∂²(1/I_ds)/∂V_gs²]^(-1/3)` against `V_gs`: the x-intercept is
/// `V_T` and `slope³ = β_0 V_ds / 2`.
///
/// `1/I_ds` is smoothed before differencing (5-point window unless
/// overridden). Points where the second derivative is not positive are
/// excluded and counted in the diagnostics.
pub fn inv_ids_extract(
    sweep: &GateSweep,
    spec: &DeviceSpec,
    r_sd: f64,
    opts: &ExtractOptions,
) -> Result<ExtractionReport, ExtractionError> {
    check_r_sd(r_sd)?;
    let curve = sweep_curve(sweep)?;
    let v_ds = positive_v_ds(sweep)?;
    let mut diagnostics = Vec::new();
    let region = fit_region(sweep, opts, &mut diagnostics);

    // longest conducting tail of the sweep
    let start = curve
        .y()
        .iter()
        .rposition(|&i| i <= 0.0)
        .map_or(0, |k| k + 1);
    if curve.len() - start < 5 {
        let v = curve.x()[start.saturating_sub(1).min(curve.len() - 1)];
        return Err(ExtractionError::NonpositiveCurrent { v_gs: v });
    }
    if !region.auto && start > 0 && region.lo <= curve.x()[start - 1] {
        return Err(ExtractionError::NonpositiveCurrent {
            v_gs: curve.x()[start - 1],
        });
    }
    let tail = curve.slice(start..curve.len())?;
    let inverse = SampledCurve::new(tail.x().to_vec(), tail.y().iter().map(|i| 1.0 / i).collect())?;
    let window = opts.smoothing.unwrap_or(INV_IDS_DEFAULT_SMOOTHING);
    let smoothed = if window > 1 {
        smooth(&inverse, window)?
    } else {
        inverse
    };
    let d2 = second_derivative(&smoothed)?;

    let mut candidates = Vec::new();
    let mut negative = 0usize;
    for (k, (v, d)) in d2.points().enumerate() {
        if !region.contains(v) {
            continue;
        }
        if d > 0.0 {
            candidates.push(k);
        } else {
            negative += 1;
        }
    }
    if negative > 0 {
        diagnostics.push(format!(
            "excluded {negative} point(s) with non-positive d2(1/I_ds)/dV_gs2"
        ));
    }
    if candidates.is_empty() {
        return Err(ExtractionError::NegativeSecondDerivative);
    }
    let g_values: Vec<f64> = d2
        .y()
        .iter()
        .map(|&d| if d > 0.0 { d.powf(-1.0 / 3.0) } else { 0.0 })
        .collect();
    let g_curve = SampledCurve::new(d2.x().to_vec(), g_values)?;
    let (linearized, fit) = fit_candidates(&g_curve, &candidates, opts, region.auto, &mut diagnostics)?;
    slope_positive(&fit)?;

    let v_t = fit.x_intercept;
    let beta = 2.0 * fit.slope.powi(3) / v_ds;
    let mu_0 = beta / spec.cox_aspect();
    let mu_sigma = 3.0 * mu_0 * fit.slope_sigma / fit.slope;

    let fit_idx = sweep_indices(sweep, &linearized.x()[fit.window.clone()]);
    let theta = theta_inv_points(sweep, &fit_idx, v_t, beta, r_sd)?;
    let currents: Vec<f64> = fit_idx.iter().map(|&k| sweep.i_ds()[k]).collect();
    let mu_eff = mu_eff_curve(&theta, &currents, mu_0, v_t, r_sd)?;

    let mut report = ExtractionReport::new(
        Method::InvIds,
        sweep.label(),
        v_ds,
        Estimate::with_sigma(v_t, fit.x_intercept_sigma),
        r_sd,
    );
    report.mu_0 = Some(Estimate::with_sigma(mu_0, mu_sigma));
    report.set_theta(theta, mu_eff);
    report.fit = Some(fit);
    report.linearized = Some(linearized);
    report.diagnostics = diagnostics;
    Ok(report)
}
