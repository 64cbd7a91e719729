use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("grading violation: {0}")]
    Grading(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn check_dim(a: usize, b: usize) -> Result<()> {
        if a == b {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(a, b))
        }
    }
}
