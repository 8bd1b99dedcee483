use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u64 },

    #[error("all-zero vector is not a projective point")]
    NotAProjectivePoint,

    #[error("no free matrix at step {step}: all {total} rank-{m} RREF matrices are used")]
    NoFreeMatrix { step: usize, m: usize, total: u128 },

    #[error("projective zero set is empty and reduction failed at step {step}: the nonempty-zero-set hypothesis does not hold")]
    EmptyProjectiveZeroSet { step: usize },

    #[error("|X| = {x_size} exceeds the bound {bound} for n = {n}")]
    BoundExceeded { x_size: usize, bound: u128, n: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
