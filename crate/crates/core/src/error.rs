use thiserror::Error;

/// Errors raised by the numerical kernels and the state constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameters outside the valid domain: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("matrix is not a density matrix: eigenvalue {0:e} is negative")]
    NotAState(f64),

    #[error("matrix is not a symmetric X-state: entry ({row}, {col}) = {value:e}, expected {expected:e}")]
    NotSymmetricX {
        row: usize,
        col: usize,
        value: f64,
        expected: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
