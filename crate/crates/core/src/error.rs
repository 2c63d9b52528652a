use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels and the matrix builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole {
        function: &'static str,
        at: Complex64,
    },

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("{what} did not converge (achieved error estimate {achieved:.3e})")]
    NonConvergence { what: &'static str, achieved: f64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("malformed matrix file: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of an iterative or quadrature procedure, as opposed
    /// to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::NonFinite(_) | Error::Consistency(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(what: &'static str, z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}
