//! Error type shared by all modules.

/// Errors raised by library operations.
///
/// Callers that map results to process exit codes treat `Domain`, `Range`,
/// `Capacity` and `Overflow` as configuration/capacity problems (exit 2);
/// mathematical violations are never errors, they are reported as failure
/// entries in a [`crate::report::VerifyReport`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query exceeds the range covered by a precomputed table.
    #[error("range error: {0}")]
    Range(String),

    /// The request exceeds the configured memory or compute budget.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An integer product exceeded the 64-bit width.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A quadrature error estimate exceeded the requested tolerance.
    #[error("quadrature error {estimate:e} exceeds tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    /// An internal contract was violated; indicates a bug, not bad input.
    #[error("internal contract violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
