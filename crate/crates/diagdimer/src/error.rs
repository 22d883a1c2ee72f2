use std::io;
use std::path::PathBuf;

use diagdimer_core::kirchhoff::KirchhoffError;
use diagdimer_core::lattice::{GraphError, RegionError};
use diagdimer_core::moves::MoveError;
use diagdimer_core::oracle::OracleError;
use diagdimer_core::slits::SlitError;
use diagdimer_core::temperley::TemperleyError;
use diagdimer_core::CoveringError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid region: {0}")]
    Region(#[from] RegionError),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid covering: {0}")]
    Covering(#[from] CoveringError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Kirchhoff(#[from] KirchhoffError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Slit(#[from] SlitError),
    #[error(transparent)]
    Temperley(#[from] TemperleyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl CliError {
    /// Process exit code: 3 when the instance is too large for the requested
    /// brute-force computation, 2 for everything wrong with the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Oracle(_) | CliError::Temperley(TemperleyError::Oracle(_)) => 3,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Json(_) => "json",
            CliError::Region(_) => "region",
            CliError::Graph(_) => "graph",
            CliError::Covering(_) => "covering",
            CliError::Invalid(_) => "invalid",
            CliError::Kirchhoff(_) => "kirchhoff",
            CliError::Move(_) => "move",
            CliError::Slit(_) => "slit",
            CliError::Temperley(TemperleyError::Oracle(_)) | CliError::Oracle(_) => "too_large",
            CliError::Temperley(_) => "temperley",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.kind(),
            "reason": self.to_string(),
            "exit_code": self.exit_code(),
        })
    }
}
