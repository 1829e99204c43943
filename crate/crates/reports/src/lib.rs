//! Report generation behind the `fockbell` binary: extremal Bell-functional
//! tables, family sweeps, metrology tables and Wigner-function slices, written
//! as CSV or JSON with a metadata block that pins every input.

#![forbid(unsafe_code)]

pub mod commands;
pub mod family;
pub mod functional;
pub mod output;
pub mod report;

pub use commands::{
    balanced_grid, qcrb_rows, sweep, table, wigner_grid, Extremized, RowFailure, WignerAxis, WignerPoint, WignerSpec,
};
pub use family::Family;
pub use functional::Functional;
pub use output::{Document, Format};
pub use report::{classify, QcrbRow, ReportRow, Violation, VIOLATION_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    State(#[from] fockbell_core::state::StateError),

    #[error(transparent)]
    SpecialFunction(#[from] fockbell_core::special::SpecialFunctionError),

    #[error(transparent)]
    Optimizer(#[from] fockbell_core::OptimizerError),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
