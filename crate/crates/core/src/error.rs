use thiserror::Error;

pub type Result<T> = std::result::Result<T, VacuumError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VacuumError {
    #[error("continuous spectrum: {0} has no discrete eigenvalues")]
    ContinuousSpectrum(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {x} lies outside the admissible domain {domain}")]
    OutOfDomain { x: f64, domain: String },

    #[error("omega = {omega} lies within {guard:e} of the eigenvalue {eigenvalue}")]
    AtEigenvalue { omega: f64, eigenvalue: f64, guard: f64 },

    #[error("unsupported geometry for this operation: {0}")]
    UnsupportedGeometry(String),

    #[error("ill-conditioned fit: residual {residual:e} exceeds {threshold:e}")]
    IllConditionedFit { residual: f64, threshold: f64 },

    #[error("series did not converge: tail estimate {tail:e} exceeds tolerance {tol:e}")]
    NonConvergent { tail: f64, tol: f64 },
}

pub(crate) fn invalid(msg: impl Into<String>) -> VacuumError {
    VacuumError::InvalidParameter(msg.into())
}
