//! Forward linear-region drain-current model.
//!
//! The device obeys the gradual-channel expression with a first-order
//! mobility-degradation factor and parasitic source/drain resistance split
//! evenly (`R_s = R_d = R_sd/2`). Extrinsic biases relate to intrinsic ones
//! through `V_GS = V_gs - I_ds R_s` and `V_DS = V_ds - I_ds R_sd`, so the
//! current is the root of a quadratic. [`ids_implicit`] solves that quadratic
//! exactly; [`ids_simplified`] is its first-order expansion, which is the form
//! every extraction method linearises.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::sweep::{DrainSweep, DrainSweepFamily, GateSweep, SweepError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid device geometry: {0}")]
    InvalidDevice(&'static str),
    #[error("invalid model parameters: {0}")]
    InvalidParams(&'static str),
    #[error("negative drain bias {0} V")]
    NegativeDrainBias(f64),
    #[error("gate bias {v_gs} V is not above threshold {v_t} V")]
    BelowThreshold { v_gs: f64, v_t: f64 },
    #[error("negative discriminant {0:e}: bias outside model validity")]
    NegativeDiscriminant(f64),
    #[error("empty bias grid")]
    EmptyGrid,
    #[error("bias grid is not strictly increasing at index {0}")]
    NonIncreasingGrid(usize),
    #[error("noise level must be finite and non-negative, got {0}")]
    InvalidNoise(f64),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// Channel geometry and gate-oxide capacitance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSpec {
    width: f64,
    length: f64,
    c_ox: f64,
}

impl DeviceSpec {
    /// `width`, `length` in m; `c_ox` in F/m².
    pub fn new(width: f64, length: f64, c_ox: f64) -> Result<Self, ModelError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(width) {
            return Err(ModelError::InvalidDevice("width must be positive"));
        }
        if !ok(length) {
            return Err(ModelError::InvalidDevice("length must be positive"));
        }
        if !ok(c_ox) {
            return Err(ModelError::InvalidDevice("oxide capacitance must be positive"));
        }
        if !ok(width / length) {
            return Err(ModelError::InvalidDevice("aspect ratio is not finite"));
        }
        Ok(Self { width, length, c_ox })
    }

    /// 4.5 µm / 1.5 µm channel with 57.8 nF/cm² oxide.
    pub fn reference_device() -> Self {
        Self::new(4.5e-6, 1.5e-6, 5.78e-4).expect("constant geometry is valid")
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn c_ox(&self) -> f64 {
        self.c_ox
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.width / self.length
    }

    /// `C_ox · W/L` in F/m²; multiply by a mobility to get `β_0`.
    pub fn cox_aspect(&self) -> f64 {
        self.c_ox * self.aspect_ratio()
    }

    /// Same oxide and width, different channel length.
    pub fn with_length(&self, length: f64) -> Result<Self, ModelError> {
        Self::new(self.width, length, self.c_ox)
    }
}

/// Extractable physical parameters of one device in one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    v_t: f64,
    mu_0: f64,
    theta: f64,
    r_sd: f64,
}

impl ModelParams {
    /// `v_t` in V, `mu_0` in m²/(V·s), `theta` in 1/V, `r_sd` in Ω.
    pub fn new(v_t: f64, mu_0: f64, theta: f64, r_sd: f64) -> Result<Self, ModelError> {
        if !v_t.is_finite() {
            return Err(ModelError::InvalidParams("threshold voltage must be finite"));
        }
        if !(mu_0.is_finite() && mu_0 > 0.0) {
            return Err(ModelError::InvalidParams("mobility must be positive"));
        }
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(ModelError::InvalidParams("theta must be non-negative"));
        }
        if !(r_sd.is_finite() && r_sd >= 0.0) {
            return Err(ModelError::InvalidParams("series resistance must be non-negative"));
        }
        Ok(Self { v_t, mu_0, theta, r_sd })
    }

    pub fn v_t(&self) -> f64 {
        self.v_t
    }

    pub fn mu_0(&self) -> f64 {
        self.mu_0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn r_sd(&self) -> f64 {
        self.r_sd
    }

    pub fn r_s(&self) -> f64 {
        self.r_sd / 2.0
    }

    pub fn r_d(&self) -> f64 {
        self.r_sd - self.r_s()
    }
}

/// Extrinsic terminal biases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPoint {
    v_gs: f64,
    v_ds: f64,
}

impl BiasPoint {
    pub fn new(v_gs: f64, v_ds: f64) -> Result<Self, ModelError> {
        if !v_ds.is_finite() || v_ds < 0.0 {
            return Err(ModelError::NegativeDrainBias(v_ds));
        }
        Ok(Self { v_gs, v_ds })
    }

    pub fn v_gs(&self) -> f64 {
        self.v_gs
    }

    pub fn v_ds(&self) -> f64 {
        self.v_ds
    }
}

/// Conductance factor `β_0 = μ_0 C_ox W/L` in A/V².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta0(f64);

impl Beta0 {
    pub fn new(value: f64) -> Option<Self> {
        (value.is_finite() && value > 0.0).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Low-field mobility implied by this factor on `spec`.
    pub fn mobility(self, spec: &DeviceSpec) -> f64 {
        self.0 / spec.cox_aspect()
    }
}

pub fn beta0(spec: &DeviceSpec, params: &ModelParams) -> Beta0 {
    Beta0(params.mu_0 * spec.c_ox * spec.aspect_ratio())
}

fn overdrive(params: &ModelParams, bias: &BiasPoint) -> Result<f64, ModelError> {
    let u = bias.v_gs - params.v_t;
    if u > 0.0 {
        Ok(u)
    } else {
        Err(ModelError::BelowThreshold {
            v_gs: bias.v_gs,
            v_t: params.v_t,
        })
    }
}

/// Effective degradation coefficient `θ + β_0 R_sd`.
fn theta_eff(beta: f64, params: &ModelParams) -> f64 {
    params.theta + beta * params.r_sd
}

/// Exact drain current: the root of
/// `R_s(θ+β_0R_sd)·I² − [1 + (θ+β_0R_sd)u + β_0R_sV_ds]·I + β_0V_ds·u = 0`
/// that vanishes with `V_ds`.
pub fn ids_implicit(
    spec: &DeviceSpec,
    params: &ModelParams,
    bias: &BiasPoint,
) -> Result<f64, ModelError> {
    let u = overdrive(params, bias)?;
    let beta = beta0(spec, params).value();
    let r_s = params.r_s();
    let quad = r_s * theta_eff(beta, params);
    let lin = 1.0 + theta_eff(beta, params) * u + beta * r_s * bias.v_ds;
    let constant = beta * bias.v_ds * u;
    let disc = lin * lin - 4.0 * quad * constant;
    // Non-negative for any valid parameters above threshold; guards NaN input paths.
    if !(disc >= 0.0) {
        return Err(ModelError::NegativeDiscriminant(disc));
    }
    // Rationalised minus branch; stays finite when the quadratic term vanishes.
    Ok(2.0 * constant / (lin + disc.sqrt()))
}

/// First-order expansion `β_0 V_ds u / (1 + (θ+β_0R_sd) u)` with `u = V_gs − V_T`.
pub fn ids_simplified(
    spec: &DeviceSpec,
    params: &ModelParams,
    bias: &BiasPoint,
) -> Result<f64, ModelError> {
    let u = overdrive(params, bias)?;
    let beta = beta0(spec, params).value();
    Ok(beta * bias.v_ds * u / (1.0 + theta_eff(beta, params) * u))
}

/// `∂I_ds/∂V_gs` of [`ids_simplified`].
pub fn gm_analytic(
    spec: &DeviceSpec,
    params: &ModelParams,
    bias: &BiasPoint,
) -> Result<f64, ModelError> {
    let u = overdrive(params, bias)?;
    let beta = beta0(spec, params).value();
    let d = 1.0 + theta_eff(beta, params) * u;
    Ok(beta * bias.v_ds / (d * d))
}

/// `∂I_ds/∂V_ds` of [`ids_simplified`]; independent of `V_ds`.
pub fn gds_analytic(
    spec: &DeviceSpec,
    params: &ModelParams,
    bias: &BiasPoint,
) -> Result<f64, ModelError> {
    let u = overdrive(params, bias)?;
    let beta = beta0(spec, params).value();
    Ok(beta * u / (1.0 + theta_eff(beta, params) * u))
}

/// Effective mobility `μ_0 / (1 + θ(V_gs − I_ds R_s − V_T))` in m²/(V·s).
pub fn mu_eff(_spec: &DeviceSpec, params: &ModelParams, bias: &BiasPoint, ids: f64) -> f64 {
    params.mu_0 / (1.0 + params.theta * (bias.v_gs - ids * params.r_s() - params.v_t))
}

/// Which current expression a synthesized sweep is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurrentModel {
    /// Exact quadratic root.
    #[default]
    Implicit,
    /// First-order expansion.
    Simplified,
}

impl CurrentModel {
    pub fn current(
        self,
        spec: &DeviceSpec,
        params: &ModelParams,
        bias: &BiasPoint,
    ) -> Result<f64, ModelError> {
        match self {
            CurrentModel::Implicit => ids_implicit(spec, params, bias),
            CurrentModel::Simplified => ids_simplified(spec, params, bias),
        }
    }
}

/// Noise level, seed and current expression for sweep synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    /// Relative standard deviation of the multiplicative Gaussian noise.
    pub noise: f64,
    pub seed: u64,
    pub model: CurrentModel,
}

impl Default for Synthesis {
    fn default() -> Self {
        Self {
            noise: 0.0,
            seed: 0,
            model: CurrentModel::Implicit,
        }
    }
}

impl Synthesis {
    pub fn noiseless(model: CurrentModel) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn noisy(model: CurrentModel, noise: f64, seed: u64) -> Self {
        Self { noise, seed, model }
    }
}

fn check_grid(grid: &[f64]) -> Result<(), ModelError> {
    if grid.is_empty() {
        return Err(ModelError::EmptyGrid);
    }
    if let Some(k) = (1..grid.len()).find(|&k| grid[k] <= grid[k - 1]) {
        return Err(ModelError::NonIncreasingGrid(k));
    }
    Ok(())
}

struct Sampler {
    rng: ChaCha8Rng,
    noise: f64,
}

impl Sampler {
    fn new(opts: &Synthesis) -> Result<Self, ModelError> {
        if !(opts.noise.is_finite() && opts.noise >= 0.0) {
            return Err(ModelError::InvalidNoise(opts.noise));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            noise: opts.noise,
        })
    }

    fn apply(&mut self, current: f64) -> f64 {
        if self.noise == 0.0 {
            return current;
        }
        let z: f64 = StandardNormal.sample(&mut self.rng);
        (current * (1.0 + self.noise * z)).max(0.0)
    }
}

/// Current at one bias, zero at or below threshold.
fn sample_current(
    spec: &DeviceSpec,
    params: &ModelParams,
    v_gs: f64,
    v_ds: f64,
    model: CurrentModel,
) -> Result<f64, ModelError> {
    if v_gs <= params.v_t {
        return Ok(0.0);
    }
    model.current(spec, params, &BiasPoint::new(v_gs, v_ds)?)
}

/// Counts above-threshold points where `(V_gs−V_T)·β_0R_sd > β_0R_sV_ds` fails.
fn linear_region_violations(params: &ModelParams, points: impl Iterator<Item = (f64, f64)>) -> usize {
    if params.r_sd == 0.0 {
        return 0;
    }
    points
        .filter(|&(v_gs, v_ds)| {
            let u = v_gs - params.v_t;
            u > 0.0 && u * params.r_sd <= params.r_s() * v_ds
        })
        .count()
}

fn violation_note(count: usize) -> Vec<String> {
    if count == 0 {
        Vec::new()
    } else {
        vec![format!(
            "linear-region assumption (V_gs-V_T)*R_sd > R_s*V_ds violated at {count} point(s)"
        )]
    }
}

/// Gate sweep at fixed `v_ds`. Points at or below threshold carry zero current.
pub fn synth_gate_sweep(
    spec: &DeviceSpec,
    params: &ModelParams,
    v_ds: f64,
    v_gs_grid: &[f64],
    opts: &Synthesis,
) -> Result<GateSweep, ModelError> {
    check_grid(v_gs_grid)?;
    if !v_ds.is_finite() || v_ds < 0.0 {
        return Err(ModelError::NegativeDrainBias(v_ds));
    }
    let mut sampler = Sampler::new(opts)?;
    let currents = v_gs_grid
        .iter()
        .map(|&v| sample_current(spec, params, v, v_ds, opts.model).map(|i| sampler.apply(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let violations = linear_region_violations(params, v_gs_grid.iter().map(|&v| (v, v_ds)));
    Ok(GateSweep::new("synthetic", v_ds, v_gs_grid.to_vec(), currents)?
        .with_notes(violation_note(violations)))
}

/// One drain sweep per entry of `v_gs_list`, all on `v_ds_grid`.
pub fn synth_drain_sweep_family(
    spec: &DeviceSpec,
    params: &ModelParams,
    v_gs_list: &[f64],
    v_ds_grid: &[f64],
    opts: &Synthesis,
) -> Result<DrainSweepFamily, ModelError> {
    check_grid(v_ds_grid)?;
    if v_gs_list.is_empty() {
        return Err(ModelError::EmptyGrid);
    }
    if let Some(&v) = v_ds_grid.iter().find(|&&v| v < 0.0) {
        return Err(ModelError::NegativeDrainBias(v));
    }
    let mut sampler = Sampler::new(opts)?;
    let mut sweeps = Vec::with_capacity(v_gs_list.len());
    let mut violations = 0;
    for &v_gs in v_gs_list {
        let currents = v_ds_grid
            .iter()
            .map(|&v_ds| {
                sample_current(spec, params, v_gs, v_ds, opts.model).map(|i| sampler.apply(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        violations += linear_region_violations(params, v_ds_grid.iter().map(|&d| (v_gs, d)));
        sweeps.push(DrainSweep::new(v_gs, v_ds_grid.to_vec(), currents)?);
    }
    Ok(DrainSweepFamily::new("synthetic", sweeps)?.with_notes(violation_note(violations)))
}

/// `start, start+step, …` up to and including `stop` (within half a step).
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return vec![start];
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_wl3() -> DeviceSpec {
        DeviceSpec::new(4.5e-6, 1.5e-6, 5.78e-4).unwrap()
    }

    /// `I ← f(I)` on the unexpanded current equation, from `I = 0`.
    fn fixed_point_oracle(beta: f64, theta: f64, r_sd: f64, u: f64, v_ds: f64) -> f64 {
        let r_s = r_sd / 2.0;
        let mut i = 0.0;
        for _ in 0..10_000 {
            let next = beta * (u - i * r_s) * (v_ds - i * r_sd) / (1.0 + theta * (u - i * r_s));
            if (next - i).abs() <= 1e-14 * next.abs() {
                return next;
            }
            i = next;
        }
        i
    }

    #[test]
    fn beta0_examples() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.1, 0.0).unwrap();
        assert!((beta0(&spec, &p).value() - 8.67e-5).abs() < 1e-18);
        let unit = DeviceSpec::new(1.0, 1.0, 1.0).unwrap();
        let p = ModelParams::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(beta0(&unit, &p).value(), 1.0);
        assert_eq!(DeviceSpec::reference_device().aspect_ratio(), 3.0);
    }

    #[test]
    fn implicit_without_resistance_is_closed_form() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.1, 0.0).unwrap();
        let i = ids_implicit(&spec, &p, &BiasPoint::new(2.6, 0.4).unwrap()).unwrap();
        let beta = 0.05 * 5.78e-4 * 3.0;
        let expected = beta * 1.0 * 0.4 / 1.1;
        assert!((i - expected).abs() <= 1e-15 * expected);
        assert!((i - 3.153e-5).abs() < 5e-9);
        let zero = ids_implicit(&spec, &p, &BiasPoint::new(2.6, 0.0).unwrap()).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn implicit_matches_fixed_point_oracle() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.1, 50.0).unwrap();
        let i = ids_implicit(&spec, &p, &BiasPoint::new(2.6, 0.4).unwrap()).unwrap();
        let oracle = fixed_point_oracle(8.67e-5, 0.1, 50.0, 1.0, 0.4);
        // frozen oracle value: 3.1381203323310225e-05
        assert!((oracle - 3.1381203323310225e-05).abs() < 1e-18);
        assert!(((i - oracle) / oracle).abs() < 1e-10, "{i} vs {oracle}");
    }

    #[test]
    fn below_threshold_is_an_error() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.1, 50.0).unwrap();
        let bias = BiasPoint::new(1.6, 0.4).unwrap();
        assert!(matches!(
            ids_implicit(&spec, &p, &bias),
            Err(ModelError::BelowThreshold { .. })
        ));
        assert!(ids_simplified(&spec, &p, &bias).is_err());
        assert!(gm_analytic(&spec, &p, &bias).is_err());
        assert!(gds_analytic(&spec, &p, &bias).is_err());
        assert!(BiasPoint::new(2.0, -0.1).is_err());
    }

    #[test]
    fn discriminant_stays_positive_above_threshold() {
        // (1+X+Y)^2 - 4XY = 1 + 2X + 2Y + (X-Y)^2 with X = (θ+β0R_sd)u, Y = β0R_sV_ds
        let spec = DeviceSpec::new(1.0, 1.0, 1.0).unwrap();
        let p = ModelParams::new(0.0, 1.0, 10.0, 1000.0).unwrap();
        let i = ids_implicit(&spec, &p, &BiasPoint::new(1.0, 1e6).unwrap()).unwrap();
        assert!(i.is_finite() && i > 0.0);
    }

    #[test]
    fn simplified_examples() {
        let unit = DeviceSpec::new(1.0, 1.0, 1.0).unwrap();
        let p = ModelParams::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let i = ids_simplified(&unit, &p, &BiasPoint::new(1.0, 0.1).unwrap()).unwrap();
        assert!((i - 0.1).abs() < 1e-15);

        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.1, 50.0).unwrap();
        let bias = BiasPoint::new(2.6, 0.4).unwrap();
        let i = ids_simplified(&spec, &p, &bias).unwrap();
        let expected = 8.67e-5 * 0.4 / (1.0 + 0.1 + 8.67e-5 * 50.0);
        assert!((i - expected).abs() < 1e-18);
        assert!((i - 3.140e-5).abs() < 5e-9);

        // linear vanishing at threshold
        let near = |eps: f64| {
            let v = 1.6 + eps;
            ids_simplified(&spec, &p, &BiasPoint::new(v, 0.4).unwrap()).unwrap() / (v - 1.6)
        };
        assert!(((near(1e-6) - near(1e-8)) / near(1e-8)).abs() < 1e-5);
        assert!((near(1e-9) - 8.67e-5 * 0.4).abs() < 1e-12);
    }

    #[test]
    fn gm_examples() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.0, 0.0).unwrap();
        for v in [1.7, 2.5, 3.9] {
            let gm = gm_analytic(&spec, &p, &BiasPoint::new(v, 0.4).unwrap()).unwrap();
            assert!((gm - 8.67e-5 * 0.4).abs() < 1e-18);
        }
        // (θ+β0·R_sd)·u = 1
        let unit = DeviceSpec::new(1.0, 1.0, 1.0).unwrap();
        let p = ModelParams::new(0.0, 2.0, 0.25, 0.125).unwrap();
        let bias = BiasPoint::new(2.0, 0.3).unwrap();
        let gm = gm_analytic(&unit, &p, &bias).unwrap();
        assert!((gm - 2.0 * 0.3 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn gds_reciprocal_identity() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.12, 50.0).unwrap();
        let beta = beta0(&spec, &p).value();
        for v in [1.8, 2.4, 3.3, 4.0] {
            let gds = gds_analytic(&spec, &p, &BiasPoint::new(v, 0.4).unwrap()).unwrap();
            let lhs = 1.0 / gds - (0.12 + beta * 50.0) / beta;
            let rhs = 1.0 / (beta * (v - 1.6));
            assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
        let ideal = ModelParams::new(1.6, 0.05, 0.0, 0.0).unwrap();
        let g = gds_analytic(&spec, &ideal, &BiasPoint::new(2.6, 0.2).unwrap()).unwrap();
        assert!((g - 8.67e-5).abs() < 1e-18);
    }

    #[test]
    fn mu_eff_degrades() {
        let spec = spec_wl3();
        let flat = ModelParams::new(1.6, 0.05, 0.0, 50.0).unwrap();
        let degr = ModelParams::new(1.6, 0.05, 0.12, 50.0).unwrap();
        let mut last = f64::INFINITY;
        for k in 1..=24 {
            let bias = BiasPoint::new(1.6 + 0.1 * k as f64, 0.4).unwrap();
            let i0 = ids_implicit(&spec, &flat, &bias).unwrap();
            assert_eq!(mu_eff(&spec, &flat, &bias, i0), 0.05);
            let i = ids_implicit(&spec, &degr, &bias).unwrap();
            let m = mu_eff(&spec, &degr, &bias, i);
            assert!(m < 0.05 && m < last);
            last = m;
        }
    }

    #[test]
    fn standard_grid_has_41_points() {
        let grid = linear_grid(0.0, 4.0, 0.1);
        assert_eq!(grid.len(), 41);
        assert_eq!(grid[0], 0.0);
        assert!((grid[40] - 4.0).abs() < 1e-12);
        assert_eq!(linear_grid(1.0, 1.0, 0.1), vec![1.0]);
    }

    #[test]
    fn synthesis_shapes_and_errors() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.12, 50.0).unwrap();
        let opts = Synthesis::default();
        let one = synth_gate_sweep(&spec, &p, 0.4, &[2.0], &opts).unwrap();
        assert_eq!(one.len(), 1);
        let sweep = synth_gate_sweep(&spec, &p, 0.4, &linear_grid(0.0, 4.0, 0.1), &opts).unwrap();
        assert_eq!(sweep.len(), 41);
        assert!(sweep.points().filter(|&(v, _)| v <= 1.6).all(|(_, i)| i == 0.0));
        assert!(sweep.points().filter(|&(v, _)| v > 1.6).all(|(_, i)| i > 0.0));
        assert_eq!(
            synth_gate_sweep(&spec, &p, 0.4, &[], &opts),
            Err(ModelError::EmptyGrid)
        );
        assert_eq!(
            synth_gate_sweep(&spec, &p, 0.4, &[1.0, 0.5], &opts),
            Err(ModelError::NonIncreasingGrid(1))
        );
        let bad = Synthesis::noisy(CurrentModel::Implicit, -0.1, 0);
        assert!(synth_gate_sweep(&spec, &p, 0.4, &[2.0], &bad).is_err());

        let fam =
            synth_drain_sweep_family(&spec, &p, &[3.0], &linear_grid(0.0, 0.5, 0.05), &opts)
                .unwrap();
        assert_eq!(fam.len(), 1);
    }

    #[test]
    fn synthesis_is_deterministic_and_noisy() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.12, 50.0).unwrap();
        let grid = linear_grid(0.0, 4.0, 0.1);
        let opts = Synthesis::noisy(CurrentModel::Implicit, 0.01, 7);
        let a = synth_gate_sweep(&spec, &p, 0.4, &grid, &opts).unwrap();
        let b = synth_gate_sweep(&spec, &p, 0.4, &grid, &opts).unwrap();
        assert!(a.i_ds().iter().zip(b.i_ds()).all(|(x, y)| x.to_bits() == y.to_bits()));
        let clean = synth_gate_sweep(&spec, &p, 0.4, &grid, &Synthesis::default()).unwrap();
        assert_ne!(a.i_ds(), clean.i_ds());
        let c = synth_gate_sweep(&spec, &p, 0.4, &grid, &Synthesis { seed: 8, ..opts }).unwrap();
        assert_ne!(a.i_ds(), c.i_ds());
    }

    #[test]
    fn linear_region_flag() {
        let spec = spec_wl3();
        let p = ModelParams::new(1.6, 0.05, 0.12, 50.0).unwrap();
        // u = 0.1 < V_ds/2 = 0.2 violates the assumption
        let s = synth_gate_sweep(&spec, &p, 0.4, &[1.7, 2.6], &Synthesis::default()).unwrap();
        assert_eq!(s.notes().len(), 1);
        let s = synth_gate_sweep(&spec, &p, 0.4, &[2.6], &Synthesis::default()).unwrap();
        assert!(s.notes().is_empty());
    }
}
