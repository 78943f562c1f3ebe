use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource budget exhausted: {0}")]
    Budget(String),
    #[error("group and parameter mismatch: {0}")]
    Mismatch(String),
    #[error("element is not central: {0}")]
    NotCentral(String),
    #[error("linear system is inconsistent: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
