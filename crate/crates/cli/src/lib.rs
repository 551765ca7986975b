//! File formats, bundled fixtures and verification drivers for the `bhkzeta` tool.

pub mod commands;
pub mod pencil;
pub mod report;
pub mod tables;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bhkzeta_core::Error),
    #[error(transparent)]
    Parse(#[from] tables::ParseError),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Mismatch(_) => 1,
            _ => 2,
        }
    }
}
