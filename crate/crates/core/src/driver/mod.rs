//! Batch experiment driver: configuration, built-in reference sets, and the
//! four commands (`fractal`, `predict`, `simulate`, `compare`) with
//! reproducible CSV/JSON outputs.

mod builtins;
mod config;
mod run;

pub use builtins::{Builtin, KnownConstants};
pub use config::{CovarianceSpec, ExperimentConfig, SetSpec};
pub use run::{
    cmd_compare, cmd_fractal, cmd_predict, cmd_simulate, output_paths, run, Command,
    GeometryReport,
};

use crate::field::FieldError;
use crate::geometry::GeometryError;
use crate::mc::McError;

/// Driver-level error with the process exit code it maps to:
/// 2 config, 3 geometry/computation, 4 synthesis, 5 grid mismatch.
#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl DriverError {
    pub fn exit_code(&self) -> i32 {
        match self {
            DriverError::Config(_) => 2,
            DriverError::Geometry(_) => 3,
            DriverError::Field(_) => 4,
            DriverError::Mc(McError::GridMismatch) => 5,
            DriverError::Mc(McError::Field(_)) => 4,
            DriverError::Mc(
                McError::ZeroReps | McError::UnsortedGrid | McError::MalformedCsv(_),
            ) => 2,
            DriverError::Mc(_) => 3,
            DriverError::Json(_) => 2,
            DriverError::Io(_) => 1,
        }
    }
}
