//! Experiment runner around `ismr-core`: typed configs, seeded parallel
//! Monte Carlo, CSV/JSON output with a replayable header, and the JSON
//! decision-tree format.

pub mod config;
pub mod experiments;
pub mod output;
pub mod seeds;
pub mod trees;

pub use config::{Command, ExperimentConfig};
pub use experiments::run_experiment;
pub use output::Report;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] ismr_core::Error),
    #[error("config error at line {line}, column {column}: {msg}")]
    Config { line: usize, column: usize, msg: String },
    #[error("invalid parameter `{field}`: {msg}")]
    Param { field: &'static str, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type LabResult<T> = std::result::Result<T, LabError>;

pub fn param(field: &'static str, msg: impl Into<String>) -> LabError {
    LabError::Param { field, msg: msg.into() }
}
