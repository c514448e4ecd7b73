//! Series-resistance estimators.

use super::{Estimate, ExtractionError};
use crate::numerics::{first_derivative, fit_line, ols, LineFit, NumericsError, SampledCurve};
use crate::sweep::{DrainSweepFamily, GateSweep};
use crate::units::{m_to_um, um_to_m};

/// Output-resistance asymptote of a drain family.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputResistanceEstimate {
    /// Intercept of `R_tot` against `1/(V_gs − V_T)`: `R_sd + θ/β_0`.
    pub r_sd: Estimate,
    /// Smallest measured `R_tot`.
    pub min_r_tot: f64,
    pub fit: LineFit,
    /// `R_tot` (Ω) against `1/(V_gs − V_T)` (1/V).
    pub points: SampledCurve,
    pub diagnostics: Vec<String>,
}

/// Total resistance `1/g_ds` at the lowest drain bias of each sweep, fitted
/// against `1/(V_gs − v_t_hint)`; the intercept is the `V_gs → ∞` limit.
pub fn rsd_output_resistance(
    family: &DrainSweepFamily,
    v_t_hint: f64,
) -> Result<OutputResistanceEstimate, ExtractionError> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in family.sweeps() {
        let u = s.v_gs() - v_t_hint;
        if u <= 0.0 || s.len() < 3 {
            continue;
        }
        let g = first_derivative(&s.curve()?)?.y()[0];
        if g > 0.0 {
            pts.push((1.0 / u, 1.0 / g));
        }
    }
    if pts.len() < 3 {
        return Err(ExtractionError::InsufficientGateValues {
            needed: 3,
            got: pts.len(),
        });
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let min_r_tot = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let points = SampledCurve::new(pts.iter().map(|p| p.0).collect(), pts.iter().map(|p| p.1).collect())?;
    let fit = fit_line(&points, 0..points.len())?;
    let diagnostics = vec![
        "intercept is R_sd + theta/beta0 and upper-bounds R_sd".to_owned(),
        format!("minimum measured R_tot = {min_r_tot:.3} ohm"),
    ];
    Ok(OutputResistanceEstimate {
        r_sd: Estimate::with_sigma(fit.intercept, fit.intercept_sigma),
        min_r_tot,
        fit,
        points,
        diagnostics,
    })
}

/// One `R_ch = V_ds/I_ds` against `L_mask` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelLine {
    pub v_gs: f64,
    /// Ω/m.
    pub slope: f64,
    /// Ω.
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionEstimate {
    pub r_sd: Estimate,
    /// `L_mask − L_eff` in m.
    pub delta_l: Estimate,
    pub lines: Vec<ChannelLine>,
    pub diagnostics: Vec<String>,
}

fn same_voltage(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

/// Common intersection of the `R_ch`-vs-`L_mask` lines, one line per gate
/// voltage shared by every device. `devices` pairs a mask length (m) with a
/// gate sweep taken on that device.
pub fn rsd_channel_length_intersection(
    devices: &[(f64, GateSweep)],
) -> Result<IntersectionEstimate, ExtractionError> {
    let mut lengths: Vec<f64> = devices.iter().map(|d| d.0).collect();
    lengths.sort_by(f64::total_cmp);
    lengths.dedup();
    if lengths.len() < 2 {
        return Err(ExtractionError::InsufficientDevices(lengths.len()));
    }

    let lookup = |s: &GateSweep, v: f64| {
        s.points()
            .find(|&(x, i)| same_voltage(x, v) && i > 0.0)
            .map(|(_, i)| s.v_ds() / i)
    };
    let mut lines = Vec::new();
    let mut diagnostics = Vec::new();
    for (v, i) in devices[0].1.points() {
        if i <= 0.0 {
            continue;
        }
        let r: Option<Vec<f64>> = devices.iter().map(|(_, s)| lookup(s, v)).collect();
        let Some(r) = r else { continue };
        let l: Vec<f64> = devices.iter().map(|d| m_to_um(d.0)).collect();
        match ols(&l, &r) {
            Ok(fit) => lines.push(ChannelLine {
                v_gs: v,
                slope: fit.slope * 1e6,
                intercept: fit.intercept,
            }),
            Err(NumericsError::DegenerateWindow) => {
                diagnostics.push(format!("V_gs = {v:.4} V: R_ch independent of L_mask; skipped"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if lines.len() < 2 {
        return Err(ExtractionError::InsufficientGateValues {
            needed: 2,
            got: lines.len(),
        });
    }

    // Least-squares point closest (vertically) to every line, in µm/Ω units:
    // minimise Σ (m_k x + c_k − y)².
    let m: Vec<f64> = lines.iter().map(|l| l.slope / 1e6).collect();
    let c: Vec<f64> = lines.iter().map(|l| l.intercept).collect();
    let k = m.len() as f64;
    let sm: f64 = m.iter().sum();
    let smm: f64 = m.iter().map(|v| v * v).sum();
    let smc: f64 = m.iter().zip(&c).map(|(a, b)| a * b).sum();
    let sc: f64 = c.iter().sum();
    let mean = sm / k;
    let spread: f64 = m.iter().map(|v| (v - mean).powi(2)).sum();
    if spread <= 1e-12 * smm {
        return Err(ExtractionError::ParallelLines);
    }
    // [smm  -sm][x]   [-smc]
    // [-sm   k ][y] = [ sc ]
    let det = k * smm - sm * sm;
    let x = (-smc * k + sm * sc) / det;
    let y = (smm * sc - sm * smc) / det;

    let ss_res: f64 = m.iter().zip(&c).map(|(a, b)| (a * x + b - y).powi(2)).sum();
    let (sx, sy) = if m.len() > 2 {
        let s2 = ss_res / (k - 2.0);
        ((s2 * k / det).sqrt(), (s2 * smm / det).sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(IntersectionEstimate {
        r_sd: Estimate::with_sigma(y, sy),
        delta_l: Estimate::with_sigma(um_to_m(x), um_to_m(sx)),
        lines,
        diagnostics,
    })
}
