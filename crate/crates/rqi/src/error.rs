//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RqiError {
    #[error("matrix is not hermitian (max |M - M^dag| element = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("density matrix is not positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("unknown tensor factor label `{0}`")]
    UnknownLabel(String),

    #[error("invalid tensor shape: {0}")]
    BadShape(String),

    #[error(
        "truncation too small: occupation tail mass {tail:.3e} exceeds 1e-10 at r = {r}; \
         use n_max >= {suggested}"
    )]
    Truncation { tail: f64, r: f64, suggested: u32 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("config parse error at line {line}: {reason}")]
    ConfigParse { line: usize, reason: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RqiError>;

impl RqiError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        RqiError::InvalidParam {
            name,
            reason: reason.into(),
        }
    }
}
