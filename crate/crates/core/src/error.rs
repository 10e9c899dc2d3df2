use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("spectrum unavailable: {0}")]
    SpectrumUnavailable(String),

    #[error("eigensolver did not converge after {iterations} iterations (max residual {residual:.3e}, tol {tol:.1e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::InvalidDomain(msg.into())
    }
}
