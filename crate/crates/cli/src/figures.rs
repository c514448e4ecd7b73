//! Figure layout for one extraction report.

use egfet_core::data_io::{Figure, Panel, Series};
use egfet_core::numerics::{first_derivative, LineFit, SampledCurve};
use egfet_core::units::mobility_to_cm2;
use egfet_core::{DrainSweepFamily, ExtractionReport, GateSweep, Method};

const V_GS: &str = "V_gs (V)";

/// Tangent of `I_ds` at the transconductance peak, as a drawable line.
fn tangent(report: &ExtractionReport) -> Option<LineFit> {
    let p = report.peak?;
    Some(LineFit {
        slope: p.g_m_peak,
        intercept: p.i_ds_peak - p.g_m_peak * p.v_gs_peak,
        x_intercept: report.v_t.value,
        r_squared: f64::NAN,
        window: 0..0,
        slope_sigma: f64::NAN,
        intercept_sigma: f64::NAN,
        x_intercept_sigma: f64::NAN,
    })
}

/// Linearised function with its fit, the raw sweep, and the θ/μ_eff curves.
/// Panels without data are left out.
pub fn method_figure(
    report: &ExtractionReport,
    gate: Option<&GateSweep>,
    family: Option<&DrainSweepFamily>,
) -> Figure {
    let context = format!("{}, V_ds = {} V", report.label, report.v_ds);
    let gate_curve = gate.and_then(|g| g.curve().ok());
    let mut panels = Vec::new();

    if let Some(lin) = &report.linearized {
        let name = report.method.function_name();
        let mut p = Panel::new(format!("{name} ({context})"), V_GS, name).with_series(Series::markers(name, lin.clone()));
        if let Some(f) = &report.fit {
            p = p.with_fit(f.clone());
        }
        panels.push(p);
    } else if let (Some(c), Some(t)) = (&gate_curve, tangent(report)) {
        panels.push(
            Panel::new(format!("I_ds tangent at peak g_m ({context})"), V_GS, "I_ds (A)")
                .with_series(Series::markers("I_ds", c.clone()))
                .with_fit(t),
        );
    }

    if report.method == Method::GdsMethod {
        if let Some(fam) = family {
            let mut p = Panel::new(format!("Output characteristics ({})", fam.label()), "V_ds (V)", "I_ds (A)");
            for s in fam.sweeps() {
                if let Ok(c) = s.curve() {
                    p = p.with_series(Series::line(format!("V_gs = {} V", s.v_gs()), c));
                }
            }
            panels.push(p);
        }
    } else if let Some(c) = &gate_curve {
        // the peak-g_m tangent panel already shows the raw current
        if report.linearized.is_some() {
            panels.push(
                Panel::new(format!("Transfer characteristic ({context})"), V_GS, "I_ds (A)")
                    .with_series(Series::markers("I_ds", c.clone())),
            );
        }
        if let Ok(gm) = first_derivative(c) {
            panels.push(
                Panel::new(format!("Transconductance ({context})"), V_GS, "g_m (S)").with_series(Series::line("g_m", gm)),
            );
        }
    }

    if let Some(theta) = &report.theta_curve {
        panels.push(
            Panel::new(format!("Mobility degradation ({context})"), V_GS, "theta (1/V)")
                .with_series(Series::markers("theta", theta.clone())),
        );
    }
    if let Some(mu) = &report.mu_eff_curve {
        let cm2 = SampledCurve::sparse(mu.x().to_vec(), mu.y().iter().map(|&m| mobility_to_cm2(m)).collect());
        if let Ok(cm2) = cm2 {
            panels.push(
                Panel::new(format!("Effective mobility ({context})"), V_GS, "mu_eff (cm2/Vs)")
                    .with_series(Series::markers("mu_eff", cm2)),
            );
        }
    }
    Figure::new(panels)
}
