//! Seeded experiment runner over the `privrep-core` algorithms. Every run
//! is a pure function of its [`ExperimentConfig`]; results are tables of
//! per-trial and summary rows written as CSV.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, Subcommand};
pub use experiments::run_experiment;
pub use report::{emit_report, ResultTable, Row, Trial};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] privrep_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
