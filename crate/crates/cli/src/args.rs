//! Command-line flags. Values are taken in lab units (V, Ω, µm, cm²/(V·s),
//! F/cm²) and converted to SI before they reach the core crate.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use egfet_core::model::linear_grid;
use egfet_core::units::{cox_from_per_cm2, um_to_m};
use egfet_core::{DeviceSpec, Method, ModelError};

#[derive(Debug, Parser)]
#[command(
    name = "egfet",
    version,
    about = "Linear-region EGFET/MOSFET simulation and parameter extraction",
    long_about = "Linear-region EGFET/MOSFET simulation and parameter extraction.\n\n\
        Units at the command line: voltages in V, currents in A, resistances in ohm, \
        mobilities in cm^2/(V s), oxide capacitance in F/cm^2, channel dimensions in um."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write synthetic gate-sweep and drain-family CSVs from model parameters.
    Simulate(SimulateArgs),
    /// Extract V_T, mu_0 and theta; one JSON report per method plus a summary table.
    Extract(ExtractArgs),
    /// Estimate the series resistance R_sd (ohm).
    Rsd(RsdArgs),
    /// Threshold-voltage shifts of each label against a reference label.
    Compare(CompareArgs),
    /// Render SVG figures for each extraction method.
    Plot(ExtractArgs),
}

/// Device geometry. Needed by every method that reports a mobility.
#[derive(Debug, Clone, Args)]
pub struct DeviceArgs {
    /// Channel width (um).
    #[arg(long = "width", value_name = "UM", default_value_t = 4.5)]
    pub width_um: f64,
    /// Channel length (um).
    #[arg(long = "length", value_name = "UM", default_value_t = 1.5)]
    pub length_um: f64,
    /// Gate-oxide capacitance per area (F/cm^2).
    #[arg(long = "cox", value_name = "F_PER_CM2", default_value_t = 57.8e-9)]
    pub cox_per_cm2: f64,
}

impl DeviceArgs {
    pub fn spec(&self) -> Result<DeviceSpec, ModelError> {
        DeviceSpec::new(um_to_m(self.width_um), um_to_m(self.length_um), cox_from_per_cm2(self.cox_per_cm2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    /// Exact root of the implicit current equation.
    Implicit,
    /// First-order expansion in R_sd.
    Simplified,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Threshold voltage V_T (V).
    #[arg(long, allow_hyphen_values = true)]
    pub vt: f64,
    /// Low-field mobility mu_0 (cm^2/(V s)).
    #[arg(long)]
    pub mu0: f64,
    /// Mobility degradation theta (1/V).
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Total series resistance R_sd (ohm), split equally between source and drain.
    #[arg(long, default_value_t = 0.0)]
    pub rsd: f64,
    /// Drain bias of the gate sweep (V).
    #[arg(long, default_value_t = 0.4)]
    pub vds: f64,
    /// Gate-voltage grid START:STOP:STEP (V).
    #[arg(long, value_name = "START:STOP:STEP", default_value = "0:4:0.1", value_parser = parse_grid)]
    pub grid: Grid,
    /// Relative standard deviation of multiplicative Gaussian current noise.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Current expression used for synthesis.
    #[arg(long, value_enum, default_value_t = ModelChoice::Implicit)]
    pub model: ModelChoice,
    /// Gate voltages (V) of a drain-sweep family to write as well, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub drain_vgs: Vec<f64>,
    /// Drain-voltage grid START:STOP:STEP (V) of the drain family.
    #[arg(long, value_name = "START:STOP:STEP", default_value = "0:0.4:0.05", value_parser = parse_grid)]
    pub vds_grid: Grid,
    /// Write the drain family as one CSV per gate voltage in a directory.
    #[arg(long)]
    pub split: bool,
    /// Label stored in the CSV metadata.
    #[arg(long, default_value = "synthetic")]
    pub label: String,
    /// Output file stem.
    #[arg(long, default_value = "sim")]
    pub name: String,
    #[command(flatten)]
    pub device: DeviceArgs,
    /// Output directory.
    #[arg(long, env = "EGFET_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    All,
    #[value(name = "peak_gm")]
    PeakGm,
    #[value(name = "ids_gm")]
    IdsGm,
    #[value(name = "inv_ids")]
    InvIds,
    #[value(name = "gds")]
    Gds,
}

impl MethodChoice {
    pub fn method(self) -> Option<Method> {
        match self {
            MethodChoice::All => None,
            MethodChoice::PeakGm => Some(Method::PeakGm),
            MethodChoice::IdsGm => Some(Method::IdsOverSqrtGm),
            MethodChoice::InvIds => Some(Method::InvIds),
            MethodChoice::Gds => Some(Method::GdsMethod),
        }
    }
}

/// Series resistance given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RsdChoice {
    Ohms(f64),
    /// Estimate from the drain family's output resistance.
    Auto,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Gate-sweep CSV (I_ds against V_gs at fixed V_ds).
    #[arg(long)]
    pub gate: Option<PathBuf>,
    /// Drain-family CSV, or a directory of per-gate-voltage CSVs.
    #[arg(long)]
    pub drain: Option<PathBuf>,
    /// Methods to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub method: Vec<MethodChoice>,
    /// Series resistance R_sd (ohm), or "auto" to estimate it from --drain.
    #[arg(long, value_name = "OHM|auto", default_value = "0", value_parser = parse_rsd)]
    pub rsd: RsdChoice,
    /// Threshold guess (V) for --rsd auto; defaults to the peak-g_m estimate from --gate.
    #[arg(long, allow_hyphen_values = true)]
    pub vt_hint: Option<f64>,
    /// Explicit fit window LO:HI in V_gs (V).
    #[arg(long, value_name = "LO:HI", value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(f64, f64)>,
    /// Smoothing window in points (odd; 1 disables).
    #[arg(long)]
    pub smooth: Option<usize>,
    /// Minimum points in an automatic fit window.
    #[arg(long, default_value_t = 6)]
    pub min_points: usize,
    #[command(flatten)]
    pub device: DeviceArgs,
    /// Output file stem; defaults to the input file stem.
    #[arg(long)]
    pub stem: Option<String>,
    /// Also write an SVG figure per method (extract only).
    #[arg(long)]
    pub plot: bool,
    /// Output directory.
    #[arg(long, env = "EGFET_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct RsdArgs {
    /// Drain family for the output-resistance estimate (ohm).
    #[arg(long)]
    pub drain: Option<PathBuf>,
    /// Threshold guess (V) for the output-resistance estimate.
    #[arg(long, allow_hyphen_values = true)]
    pub vt_hint: Option<f64>,
    /// Gate sweep used for the threshold guess when --vt-hint is absent.
    #[arg(long)]
    pub gate: Option<PathBuf>,
    /// Gate sweep of one device as MASK_LENGTH_UM:PATH; repeat for the intersection method.
    #[arg(long = "device", value_name = "L_UM:PATH", value_parser = parse_device)]
    pub devices: Vec<(f64, PathBuf)>,
    /// Output file stem.
    #[arg(long, default_value = "rsd")]
    pub name: String,
    /// Output directory.
    #[arg(long, env = "EGFET_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Extraction report JSON; repeatable.
    #[arg(long = "report")]
    pub reports: Vec<PathBuf>,
    /// Gate-sweep CSV to extract with the gate-sweep methods first; repeatable.
    #[arg(long = "sweep")]
    pub sweeps: Vec<PathBuf>,
    /// Label of the reference condition.
    #[arg(long)]
    pub reference: String,
    /// Series resistance R_sd (ohm) used when extracting --sweep inputs.
    #[arg(long, default_value_t = 0.0)]
    pub rsd: f64,
    #[command(flatten)]
    pub device: DeviceArgs,
    /// Output file stem.
    #[arg(long, default_value = "compare")]
    pub name: String,
    /// Output directory.
    #[arg(long, env = "EGFET_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

/// `START:STOP:STEP`, inclusive of STOP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.step)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err("expected START:STOP:STEP".into());
    };
    let g = Grid {
        start: number(start)?,
        stop: number(stop)?,
        step: number(step)?,
    };
    if g.step <= 0.0 {
        return Err("STEP must be positive".into());
    }
    if g.stop < g.start {
        return Err("STOP is below START".into());
    }
    Ok(g)
}

pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let (lo, hi) = (number(lo)?, number(hi)?);
    if hi <= lo {
        return Err("HI must exceed LO".into());
    }
    Ok((lo, hi))
}

pub fn parse_rsd(s: &str) -> Result<RsdChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(RsdChoice::Auto);
    }
    let v = number(s)?;
    if v < 0.0 {
        return Err("resistance must be non-negative".into());
    }
    Ok(RsdChoice::Ohms(v))
}

pub fn parse_device(s: &str) -> Result<(f64, PathBuf), String> {
    let (l, path) = s.split_once(':').ok_or("expected L_UM:PATH")?;
    let l = number(l)?;
    if l <= 0.0 {
        return Err("mask length must be positive".into());
    }
    if path.is_empty() {
        return Err("missing path".into());
    }
    Ok((l, PathBuf::from(path)))
}
