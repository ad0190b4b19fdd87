use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("matrix has no eigenvalue above the zero threshold {threshold:e}")]
    NoPositiveSpectrum { threshold: f64 },

    #[error("inconsistent system: right-hand side is outside the range (residual {residual:e})")]
    InconsistentSystem { residual: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("iterates diverged at iteration {iteration} (norm {norm:e})")]
    Divergence { iteration: usize, norm: f64 },

    #[error("eps = {eps:e} violates the smallness condition eps <= sigma / a = {limit:e}")]
    OutsideValidity { eps: f64, limit: f64 },

    #[error("at eps = {eps:e}: {source}")]
    AtEps { eps: f64, source: Box<Error> },

    #[error("at iteration {iteration}: {source}")]
    AtIteration { iteration: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at_eps(self, eps: f64) -> Self {
        Error::AtEps {
            eps,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// Innermost error, with eps / iteration annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtEps { source, .. } | Error::AtIteration { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::NoConvergence { .. }
                | Error::NoPositiveSpectrum { .. }
                | Error::Divergence { .. }
                | Error::NotPositiveDefinite
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
