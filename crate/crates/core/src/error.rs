use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    InvalidPrime(u64),

    #[error("division by zero in the prime field")]
    DivisionByZero,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),

    #[error("constant coefficient must be 1")]
    NotUnit,

    #[error("numerator degree d = {d} must be below the truncation order m = {m}")]
    EmptyRowSet { d: u32, m: u32 },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("matrix is singular at the sampled point")]
    Singular,

    #[error("no invertible sample found after {0} attempts")]
    SamplesExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
