use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("p must be at least 2, got {0}")]
    InvalidP(i64),
    #[error("mode pairing {pairing} is not integral on sector {sector}")]
    NonIntegralPairing { pairing: String, sector: String },
    #[error("vector is not homogeneous in {0}")]
    NotHomogeneous(&'static str),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("independent computations disagree: {0}")]
    RouteMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
