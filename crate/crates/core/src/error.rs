//! Crate-wide error type and result alias.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Numerical` maps to CLI exit code 2; every other variant maps to exit
/// code 1 (validation / input problems).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        actual: usize,
    },

    #[error("latent point outside domain ball: ||z|| = {norm} exceeds radius {radius}")]
    DomainViolation { norm: f64, radius: f64 },

    #[error("layer {layer}: input dimension {actual} does not chain with previous output {expected}")]
    DimensionChain {
        layer: usize,
        expected: usize,
        actual: usize,
    },

    #[error("unsupported activation '{0}' (expected one of: relu, sigmoid, tanh, none)")]
    UnsupportedActivation(String),

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("no closed form: kind '{kind}' does not support method '{method}'")]
    NoClosedForm { kind: String, method: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for validation-class errors,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
