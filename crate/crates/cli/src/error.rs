use egfet_core::data_io::DataError;
use egfet_core::{ExtractionError, ModelError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("invalid model parameters: {0}")]
    Model(#[from] ModelError),
    #[error("input: {0}")]
    Input(DataError),
    #[error("output: {0}")]
    Output(DataError),
    #[error("{context}: {source}")]
    Extraction {
        context: String,
        #[source]
        source: ExtractionError,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn extraction(context: impl Into<String>, source: ExtractionError) -> Self {
        CliError::Extraction {
            context: context.into(),
            source,
        }
    }

    /// Process exit status. 2 is left to the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Model(_) => 3,
            CliError::Input(_) => 4,
            CliError::Output(_) => 5,
            CliError::Extraction { source, .. } => extraction_code(source),
        }
    }
}

/// One code per extraction failure, from 10 up.
pub fn extraction_code(e: &ExtractionError) -> i32 {
    use ExtractionError::*;
    match e {
        TooFewPoints { .. } => 10,
        NoInteriorMax { .. } => 11,
        NonpositiveGm { .. } => 12,
        NegativeSecondDerivative => 13,
        NonpositiveCurrent { .. } => 14,
        NonpositiveDerivative { .. } => 15,
        InsufficientGateValues { .. } => 16,
        InsufficientDevices(_) => 17,
        ParallelLines => 18,
        WindowBelowThreshold { .. } => 19,
        EmptyWindow { .. } => 20,
        NonpositiveSlope => 21,
        MissingReference(_) => 22,
        TooFewReports(_) => 23,
        NoCommonDrainGrid => 24,
        ZeroDrainBias => 25,
        InvalidResistance(_) => 26,
        Numerics(_) => 27,
        Model(_) => 28,
        Sweep(_) => 29,
    }
}
