//! Config-driven runner for the epsilon-entropy experiments in `mdim-core`,
//! with JSON results and plot-ready CSV tables.

pub mod config;
pub mod emit;
pub mod error;
pub mod record;
pub mod runner;

pub use config::{Command, ConfigError, ExperimentConfig, Validated};
pub use error::RunError;
pub use record::{ResultRecord, ResultsFile};
pub use runner::{execute, run_path, write_outputs, RunOutput};
