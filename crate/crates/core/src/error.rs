use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("zero is not a valid argument to {0}")]
    Zero(&'static str),

    #[error("{0} is not squarefree")]
    NotSquarefree(i64),

    #[error("d = {0} does not define a quadratic field")]
    DegenerateField(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} must be an odd prime")]
    EvenPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("modulus {0} is below 2")]
    ModulusTooSmall(u64),

    #[error("modulus {modulus} exceeds the enumeration bound {bound}")]
    BoundExceeded { modulus: u64, bound: u64 },

    /// An arithmetic identity that must hold failed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("oracle mismatch at d = {d}, n = {n}: {detail}")]
    OracleMismatch { d: i64, n: u64, detail: String },

    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
