use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every evaluation routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside the region where the requested form is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The function has a pole at (or numerically indistinguishable from) the requested point.
    #[error("pole: {0}")]
    Pole(String),

    /// A series or quadrature did not meet its stopping rule.
    #[error("no convergence in {what} after {steps} steps (partial value {partial})")]
    NonConvergence {
        what: String,
        partial: Complex64,
        steps: usize,
    },

    /// A normalising quantity vanished.
    #[error("degenerate: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn pole(msg: impl Into<String>) -> Self {
        Error::Pole(msg.into())
    }

    pub(crate) fn non_convergence(what: impl Into<String>, partial: Complex64, steps: usize) -> Self {
        Error::NonConvergence {
            what: what.into(),
            partial,
            steps,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
