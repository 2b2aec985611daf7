//! Error type shared across the crate.

use thiserror::Error;

/// Unified error for parameter validation, numerical failure, and I/O.
#[derive(Debug, Error)]
pub enum FtrError {
    /// A function argument lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or scenario parameter violates its invariant.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An iteration or series failed to reach its target accuracy.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// A scenario file failed to parse; `line` is 1-based.
    #[error("config error (line {line}): {msg}")]
    Config { line: usize, msg: String },

    /// A scenario file is structurally invalid beyond a single line.
    #[error("config error: {0}")]
    ConfigGeneral(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl FtrError {
    /// Process exit code for the CLI: 2 for configuration problems,
    /// 3 for numerical non-convergence, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            FtrError::Config { .. }
            | FtrError::ConfigGeneral(_)
            | FtrError::InvalidParam(_)
            | FtrError::Domain(_) => 2,
            FtrError::NonConvergence(_) => 3,
            FtrError::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, FtrError>;
