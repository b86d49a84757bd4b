use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unit mismatch: operator in {left}, state in {right}")]
    UnitMismatch { left: String, right: String },

    #[error("eigenstate index {index} exceeds the supported bound {limit}")]
    Truncation { index: u64, limit: u64 },

    #[error("grid does not cover the state: {reason} (trace deficit {deficit:.3e})")]
    DomainCoverage { reason: String, deficit: f64 },

    #[error("integration failed after {step} of {total} steps: {reason}")]
    IntegrationFailure {
        step: usize,
        total: usize,
        reason: String,
    },

    #[error("kernel is not Gaussian: residual rms {residual:.3e} exceeds {threshold:.3e}")]
    FitQuality { residual: f64, threshold: f64 },

    #[error("eigendecomposition failed: {0}")]
    Decomposition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Config(#[from] crate::scenarios::ConfigError),
}

pub(crate) fn require_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

pub(crate) fn require_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
