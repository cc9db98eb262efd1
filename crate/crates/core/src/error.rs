use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variants are grouped by how a caller should react: malformed input
/// (`Parse`, `Semantic`), input that is well formed but mathematically
/// invalid (`Validation`, `ContextMismatch`, `DimensionMismatch`), and
/// violations of internal invariants that indicate a bug (`InternalInvariant`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Semantic(String),

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("genus mismatch: {left} vs {right}")]
    ContextMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Semantic(_) => 1,
            Error::Validation(_) | Error::ContextMismatch { .. } | Error::DimensionMismatch { .. } => 2,
            Error::InternalInvariant(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
