//! Linear-region EGFET/MOSFET modelling and parameter extraction.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: forward drain-current model with mobility degradation and
//!   symmetric source/drain series resistance, plus sweep synthesis.
//! - [`numerics`]: grid differentiation, local quadratic smoothing and
//!   windowed straight-line fits.
//! - [`extraction`]: peak-g_m, `I_ds/sqrt(g_m)`, `1/I_ds` and `g_ds` extraction
//!   methods, series-resistance estimators and threshold-shift comparison.
//! - [`data_io`]: sweep CSV ingestion, JSON reports and SVG plots.
//!
//! Internally every quantity is SI (A, V, m, F/m², m²/(V·s)). Conversions to
//! the lab units (cm²/(V·s), F/cm²) happen only in [`units`] and at the file
//! boundary.

pub mod data_io;
pub mod extraction;
pub mod model;
pub mod numerics;
pub mod sweep;
pub mod units;

pub use extraction::{ExtractOptions, ExtractionError, ExtractionReport, Method};
pub use model::{BiasPoint, Beta0, CurrentModel, DeviceSpec, ModelError, ModelParams, Synthesis};
pub use numerics::{LineFit, NumericsError, SampledCurve};
pub use sweep::{DrainSweep, DrainSweepFamily, GateSweep};
