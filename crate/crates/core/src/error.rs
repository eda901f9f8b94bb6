use thiserror::Error;

/// Errors raised by the construction and the numerical estimates.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A geometric or structural invariant does not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Parameters are inconsistent with each other.
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
