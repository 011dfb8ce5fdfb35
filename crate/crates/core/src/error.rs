use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("length {got} does not match the expected length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} needs {required}, exceeding the configured bound of {bound} (raise the budget to allow it)")]
    BoundExceeded { what: &'static str, required: usize, bound: usize },

    #[error("malformed distribution: {0}")]
    MalformedDistribution(String),

    #[error("key {key} is not produced by keygen on {x} for any coin string")]
    UnreachableKey { x: String, key: String },

    #[error("key generation failed on all {attempts} attempts")]
    KeygenFailed { attempts: usize },

    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),
}
