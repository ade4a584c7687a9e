use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("flux must be finite, got {0}")]
    NonFiniteFlux(f64),

    #[error("invalid flux literal `{0}`")]
    FluxSyntax(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("boundary condition {condition} is not admissible at a {end} end")]
    IncompatibleBoundary { condition: String, end: String },

    #[error("failed to bracket eigenvalue {index} below {limit:e} (counting function {count})")]
    NoBracket { index: usize, limit: f64, count: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
