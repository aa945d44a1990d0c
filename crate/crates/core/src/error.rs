use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("non-physical {what}: {detail}")]
    NonPhysical { what: &'static str, detail: String },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: String, detail: String },

    #[error("relaxation spec violates complete positivity: beta^2 = {beta_sq} > alpha = {alpha}")]
    NotCompletelyPositive { alpha: f64, beta_sq: f64 },

    #[error("fidelity undefined: Choi state has zero trace")]
    UndefinedFidelity,

    #[error("linear inversion under-determined: design rank {rank} of {params} parameters (null space dimension {null_dim})")]
    UnderDetermined { rank: usize, params: usize, null_dim: usize },

    #[error("relaxation ratio undefined: {0}")]
    ExtractionUndefined(String),

    #[error("probabilities sum to {0}, expected 1 (non trace-preserving or miscalibrated data)")]
    NotNormalized(f64),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("unsupported schema version `{found}` (reader supports `{supported}`)")]
    SchemaVersion { found: String, supported: String },

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.into(), detail: detail.into() }
    }

    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension { expected: expected.to_string(), found: found.to_string() }
    }
}
