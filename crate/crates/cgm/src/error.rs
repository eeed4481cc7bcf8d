//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CgmError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate day: {0}")]
    DegenerateDay(String),

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("insufficient history: {0}")]
    InsufficientHistory(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("checkpoint incompatible with configuration: {0}")]
    Incompatible(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CgmError>;

impl CgmError {
    /// Process exit code for the CLI: 1 verification, 2 usage/config, 3 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CgmError::Verification(_) => 1,
            CgmError::Config(_) | CgmError::Validation(_) | CgmError::Incompatible(_) => 2,
            CgmError::Io(_) => 3,
            _ => 1,
        }
    }
}
