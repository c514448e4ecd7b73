//! Parameter extraction from gate and drain sweeps.
//!
//! Each gate-sweep method builds a function of the measured current that is a
//! straight line in `V_gs` under the first-order model, fits it, and reads the
//! threshold voltage off the x-intercept and the low-field mobility off the
//! slope:
//!
//! | method | linearised function | slope² or slope³ gives |
//! |--------|---------------------|------------------------|
//! | [`Method::IdsOverSqrtGm`] | `I_ds / sqrt(g_m)` | `β_0 V_ds` |
//! | [`Method::InvIds`] | `[∂²(1/I_ds)/∂V_gs²]^(-1/3)` | `β_0 V_ds / 2` (cubed) |
//! | [`Method::GdsMethod`] | `g_ds / sqrt(∂g_ds/∂V_gs)` | `β_0` |
//!
//! [`Method::PeakGm`] only yields a threshold voltage.

mod compare;
mod gate;
mod gds;
mod rsd;

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::model::ModelError;
use crate::numerics::{LineFit, NumericsError, SampledCurve};
use crate::sweep::SweepError;

pub use compare::{compare_reports, ShiftRow, ShiftTable};
pub use gate::{
    ids_over_sqrt_gm_extract, inv_ids_extract, peak_gm_extract, theta_from_eq12,
    theta_from_inverse_current,
};
pub use gds::gds_method_extract;
pub use rsd::{
    rsd_channel_length_intersection, rsd_output_resistance, ChannelLine, IntersectionEstimate,
    OutputResistanceEstimate,
};

/// Minimum gate-sweep length for any extraction.
pub const MIN_SWEEP_POINTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractionError {
    #[error("sweep has {got} points, extraction needs at least {needed}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("transconductance peaks at the sweep edge ({v_gs} V); the sweep does not reach peak g_m")]
    NoInteriorMax { v_gs: f64 },
    #[error("g_m <= 0 at V_gs = {v_gs} V inside the fit window")]
    NonpositiveGm { v_gs: f64 },
    #[error("no usable points: second derivative of 1/I_ds is not positive")]
    NegativeSecondDerivative,
    #[error("drain current is not positive at V_gs = {v_gs} V")]
    NonpositiveCurrent { v_gs: f64 },
    #[error("g_ds or its gate derivative is not positive; {usable} usable gate values")]
    NonpositiveDerivative { usable: usize },
    #[error("need at least {needed} distinct gate voltages, got {got}")]
    InsufficientGateValues { needed: usize, got: usize },
    #[error("need at least 2 devices with distinct mask lengths, got {0}")]
    InsufficientDevices(usize),
    #[error("channel-resistance lines are parallel; no common intersection")]
    ParallelLines,
    #[error("fit window starts at or below the threshold voltage {v_t} V")]
    WindowBelowThreshold { v_t: f64 },
    #[error("fit window {lo}..{hi} V contains fewer than 3 usable points")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("extracted slope is not positive; cannot derive mobility")]
    NonpositiveSlope,
    #[error("reference label {0:?} not found among reports")]
    MissingReference(String),
    #[error("need at least 2 reports to compare, got {0}")]
    TooFewReports(usize),
    #[error("drain sweeps share no common V_ds range")]
    NoCommonDrainGrid,
    #[error("drain bias must be positive to derive mobility")]
    ZeroDrainBias,
    #[error("invalid series resistance {0} ohm")]
    InvalidResistance(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// Extraction method identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    PeakGm,
    IdsOverSqrtGm,
    InvIds,
    GdsMethod,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::PeakGm,
        Method::IdsOverSqrtGm,
        Method::InvIds,
        Method::GdsMethod,
    ];

    /// Stable identifier used in files and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PeakGm => "peak_gm",
            Method::IdsOverSqrtGm => "ids_gm",
            Method::InvIds => "inv_ids",
            Method::GdsMethod => "gds",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Human-readable name of the linearised function.
    pub fn function_name(self) -> &'static str {
        match self {
            Method::PeakGm => "I_ds tangent at peak g_m",
            Method::IdsOverSqrtGm => "I_ds/g_m^0.5",
            Method::InvIds => "[d2(1/I_ds)/dV_gs2]^(-1/3)",
            Method::GdsMethod => "g_ds/(dg_ds/dV_gs)^0.5",
        }
    }

    /// Whether the method consumes a gate sweep (as opposed to a drain family).
    pub fn uses_gate_sweep(self) -> bool {
        !matches!(self, Method::GdsMethod)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value with an optional one-sigma uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub sigma: Option<f64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, sigma: None }
    }

    pub fn with_sigma(value: f64, sigma: f64) -> Self {
        Self {
            value,
            sigma: sigma.is_finite().then_some(sigma),
        }
    }
}

/// Extra output of the peak-transconductance method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakGmDetail {
    pub v_gs_peak: f64,
    pub g_m_peak: f64,
    pub i_ds_peak: f64,
    /// Gate voltage at the maximum of `∂g_m/∂V_gs`.
    pub v_t_max_dgm: Option<f64>,
}

/// Result of one extraction method on one sweep (or one `V_ds` slice).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub method: Method,
    pub label: String,
    pub v_ds: f64,
    pub v_t: Estimate,
    /// m²/(V·s); absent for the peak-g_m method.
    pub mu_0: Option<Estimate>,
    pub theta_curve: Option<SampledCurve>,
    pub theta_range: Option<(f64, f64)>,
    /// m²/(V·s) against `V_gs`.
    pub mu_eff_curve: Option<SampledCurve>,
    pub r_sd_used: f64,
    pub fit: Option<LineFit>,
    /// The method's linearised function against `V_gs`.
    pub linearized: Option<SampledCurve>,
    pub peak: Option<PeakGmDetail>,
    pub diagnostics: Vec<String>,
}

impl ExtractionReport {
    pub(crate) fn new(method: Method, label: &str, v_ds: f64, v_t: Estimate, r_sd: f64) -> Self {
        Self {
            method,
            label: label.to_owned(),
            v_ds,
            v_t,
            mu_0: None,
            theta_curve: None,
            theta_range: None,
            mu_eff_curve: None,
            r_sd_used: r_sd,
            fit: None,
            linearized: None,
            peak: None,
            diagnostics: Vec::new(),
        }
    }

    /// Low-field mobility in cm²/(V·s), if the method produced one.
    pub fn mu_0_cm2(&self) -> Option<f64> {
        self.mu_0.map(|m| crate::units::mobility_to_cm2(m.value))
    }

    pub(crate) fn set_theta(&mut self, theta: SampledCurve, mu_eff: SampledCurve) {
        self.theta_range = theta.y_range();
        self.theta_curve = Some(theta);
        self.mu_eff_curve = Some(mu_eff);
    }
}

/// Knobs shared by the extraction methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractOptions {
    /// Explicit `V_gs` fit range (inclusive); overrides the automatic window.
    pub window: Option<(f64, f64)>,
    /// Minimum points in an automatic fit window.
    pub min_points: usize,
    /// Smoothing window override (odd; 1 disables). `None` uses each method's default.
    pub smoothing: Option<usize>,
    /// Automatic windows start this far above the peak-g_m threshold estimate.
    pub threshold_margin: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            window: None,
            min_points: 6,
            smoothing: None,
            threshold_margin: 0.2,
        }
    }
}

/// Smoothing window the `1/I_ds` method applies unless overridden.
pub const INV_IDS_DEFAULT_SMOOTHING: usize = 5;

pub(crate) fn check_r_sd(r_sd: f64) -> Result<(), ExtractionError> {
    if r_sd.is_finite() && r_sd >= 0.0 {
        Ok(())
    } else {
        Err(ExtractionError::InvalidResistance(r_sd))
    }
}

/// Fits the points of `curve` at `candidates` and returns the sub-curve with
/// its fit. The fit window indexes the returned sub-curve.
///
/// With `auto` the window comes from [`crate::numerics::auto_window`];
/// otherwise every candidate is used. Auto mode falls back to all candidates
/// (with a diagnostic) when there are fewer than `min_points` of them.
pub(crate) fn fit_candidates(
    curve: &SampledCurve,
    candidates: &[usize],
    opts: &ExtractOptions,
    auto: bool,
    diagnostics: &mut Vec<String>,
) -> Result<(SampledCurve, LineFit), ExtractionError> {
    let sub = curve.select(candidates)?;
    if sub.len() < 3 {
        let (lo, hi) = match (sub.x().first(), sub.x().last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (f64::NAN, f64::NAN),
        };
        return Err(ExtractionError::EmptyWindow { lo, hi });
    }
    let window: Range<usize> = if auto && sub.len() >= opts.min_points {
        crate::numerics::auto_window(&sub, opts.min_points)?
    } else {
        if auto {
            diagnostics.push(format!(
                "only {} usable points (< {}); fitted all of them",
                sub.len(),
                opts.min_points
            ));
        }
        0..sub.len()
    };
    let fit = crate::numerics::fit_line(&sub, window)?;
    Ok((sub, fit))
}
