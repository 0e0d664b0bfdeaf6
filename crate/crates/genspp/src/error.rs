use thiserror::Error;

/// Errors surfaced by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// Structural problems: mismatched dimensions, invalid hyperparameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed runtime inputs (empty batches, length mismatches, bad labels).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// API misuse, e.g. backward before forward.
    #[error("usage error: {0}")]
    Usage(String),

    /// Toy data generation could not satisfy the acceptance rules.
    #[error("generation error for class {class}: {msg}")]
    Generation { class: usize, msg: String },

    /// Parse failure in a JSONL dataset file.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
