use thiserror::Error;

/// Errors raised by the algebra, group and series layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0} (expected 1 <= n <= 8)")]
    UnsupportedDimension(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular value: {0}")]
    Singularity(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("result is not a vector: residual of higher grades {0:e}")]
    NotAVector(f64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series identically zero: {0}")]
    IdenticallyZero(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("quadrature rule failed self-test: {0}")]
    Quadrature(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error stems from caller-supplied parameters rather than
    /// from numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::UnsupportedDimension(_)
                | Error::Unsupported(_)
                | Error::InvalidParameters(_)
                | Error::Domain(_)
                | Error::IdenticallyZero(_)
                | Error::Contract(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
