//! Measured or synthesized I-V records.

use thiserror::Error;

use crate::numerics::SampledCurve;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("sweep has no points")]
    Empty,
    #[error("column lengths differ: {0} voltages, {1} currents")]
    LengthMismatch(usize, usize),
    #[error("voltage grid is not strictly increasing at index {0}")]
    NonMonotoneGrid(usize),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("negative current {value} at index {index}")]
    NegativeCurrent { index: usize, value: f64 },
    #[error("negative drain bias {0} V")]
    NegativeDrainBias(f64),
    #[error("duplicate gate voltage {0} V in drain family")]
    DuplicateGate(f64),
}

fn validate_columns(v: &[f64], i: &[f64]) -> Result<(), SweepError> {
    if v.is_empty() {
        return Err(SweepError::Empty);
    }
    if v.len() != i.len() {
        return Err(SweepError::LengthMismatch(v.len(), i.len()));
    }
    for (k, (&x, &y)) in v.iter().zip(i).enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(SweepError::NonFinite(k));
        }
        if y < 0.0 {
            return Err(SweepError::NegativeCurrent { index: k, value: y });
        }
        if k > 0 && x <= v[k - 1] {
            return Err(SweepError::NonMonotoneGrid(k));
        }
    }
    Ok(())
}

/// Drain current against gate voltage at a fixed drain bias.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSweep {
    label: String,
    v_ds: f64,
    v_gs: Vec<f64>,
    i_ds: Vec<f64>,
    notes: Vec<String>,
}

impl GateSweep {
    pub fn new(
        label: impl Into<String>,
        v_ds: f64,
        v_gs: Vec<f64>,
        i_ds: Vec<f64>,
    ) -> Result<Self, SweepError> {
        if !v_ds.is_finite() {
            return Err(SweepError::NonFinite(0));
        }
        if v_ds < 0.0 {
            return Err(SweepError::NegativeDrainBias(v_ds));
        }
        validate_columns(&v_gs, &i_ds)?;
        Ok(Self {
            label: label.into(),
            v_ds,
            v_gs,
            i_ds,
            notes: Vec::new(),
        })
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn v_ds(&self) -> f64 {
        self.v_ds
    }

    pub fn v_gs(&self) -> &[f64] {
        &self.v_gs
    }

    pub fn i_ds(&self) -> &[f64] {
        &self.i_ds
    }

    /// Free-text flags attached at synthesis or read time.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.v_gs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_gs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.v_gs.iter().copied().zip(self.i_ds.iter().copied())
    }

    /// `I_ds` against `V_gs` as a curve. Needs at least two points.
    pub fn curve(&self) -> Result<SampledCurve, crate::numerics::NumericsError> {
        SampledCurve::new(self.v_gs.clone(), self.i_ds.clone())
    }

    /// Multiplies every current by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.i_ds.iter_mut().for_each(|i| *i *= factor);
        out
    }

    /// Shifts every gate voltage by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.v_gs.iter_mut().for_each(|v| *v += delta);
        out
    }
}

/// One `I_ds`-`V_ds` trace at a fixed gate voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct DrainSweep {
    v_gs: f64,
    v_ds: Vec<f64>,
    i_ds: Vec<f64>,
}

impl DrainSweep {
    pub fn new(v_gs: f64, v_ds: Vec<f64>, i_ds: Vec<f64>) -> Result<Self, SweepError> {
        if !v_gs.is_finite() {
            return Err(SweepError::NonFinite(0));
        }
        validate_columns(&v_ds, &i_ds)?;
        Ok(Self { v_gs, v_ds, i_ds })
    }

    pub fn v_gs(&self) -> f64 {
        self.v_gs
    }

    pub fn v_ds(&self) -> &[f64] {
        &self.v_ds
    }

    pub fn i_ds(&self) -> &[f64] {
        &self.i_ds
    }

    pub fn len(&self) -> usize {
        self.v_ds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_ds.is_empty()
    }

    pub fn curve(&self) -> Result<SampledCurve, crate::numerics::NumericsError> {
        SampledCurve::new(self.v_ds.clone(), self.i_ds.clone())
    }
}

/// Drain sweeps at several gate voltages, kept sorted by `v_gs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrainSweepFamily {
    label: String,
    sweeps: Vec<DrainSweep>,
    notes: Vec<String>,
}

impl DrainSweepFamily {
    pub fn new(label: impl Into<String>, mut sweeps: Vec<DrainSweep>) -> Result<Self, SweepError> {
        if sweeps.is_empty() {
            return Err(SweepError::Empty);
        }
        sweeps.sort_by(|a, b| a.v_gs.total_cmp(&b.v_gs));
        if let Some(w) = sweeps.windows(2).find(|w| w[0].v_gs == w[1].v_gs) {
            return Err(SweepError::DuplicateGate(w[0].v_gs));
        }
        Ok(Self {
            label: label.into(),
            sweeps,
            notes: Vec::new(),
        })
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sweeps(&self) -> &[DrainSweep] {
        &self.sweeps
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn gate_voltages(&self) -> Vec<f64> {
        self.sweeps.iter().map(|s| s.v_gs).collect()
    }

    pub fn len(&self) -> usize {
        self.sweeps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sweeps.is_empty()
    }
}
