use std::path::PathBuf;

use crate::config::ConfigError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_CHAIN: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => EXIT_VALIDATION,
            _ => EXIT_OTHER,
        }
    }
}

fn root(e: &mdim_core::Error) -> &mdim_core::Error {
    match e {
        mdim_core::Error::Node { cause, .. } => root(cause),
        other => other,
    }
}

/// `cap`, `bracket` or `computation`, from the innermost cause.
pub fn error_kind(e: &mdim_core::Error) -> &'static str {
    match root(e) {
        mdim_core::Error::CapExceeded { .. } => "cap",
        mdim_core::Error::BracketFailure(_) => "bracket",
        _ => "computation",
    }
}

pub fn kind_exit_code(kind: &str) -> u8 {
    match kind {
        "cap" => EXIT_CAP,
        "bracket" => EXIT_CHAIN,
        _ => EXIT_OTHER,
    }
}
