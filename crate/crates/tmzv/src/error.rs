use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("modulus is reducible: nontrivial factor {witness}")]
    Reducible { witness: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative twist {0} cannot be materialized")]
    NegativeTwist(i64),
    #[error("jet order {order} too small for request {need}")]
    InsufficientOrder { order: usize, need: usize },
    #[error("pole at the expansion point t = theta")]
    PoleAtTheta,
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("point outside the convergence domain: {0}")]
    Domain(String),
    #[error("divergence guard tripped at term {index}: {detail}")]
    Divergence { index: usize, detail: String },
    #[error("precision target not reached: wanted {wanted}, got {got}")]
    Precision { wanted: i64, got: i64 },
    #[error("identity check failed: {0}")]
    Check(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
