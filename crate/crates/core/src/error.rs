use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("inhomogeneous element: {0}")]
    Inhomogeneous(String),
    #[error("differential does not square to zero on `{gen}`: residual {residual}")]
    DifferentialSquare { gen: String, residual: String },
    #[error("enumeration limit exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
