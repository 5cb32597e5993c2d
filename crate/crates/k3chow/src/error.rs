use thiserror::Error;

/// Errors shared across the calculus and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    /// A factor index was out of range or degenerate (e.g. a diagonal on a
    /// single factor).
    #[error("invalid factor: {0}")]
    InvalidFactor(String),

    /// Two classes that must live on the same product/surface model do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Bad instance data (violated hypothesis, inconsistent partition of the
    /// factor set, malformed expression).
    #[error("input error: {0}")]
    Input(String),

    /// Bad surface model (non-symmetric or degenerate Gram matrix, ...).
    #[error("invalid surface model: {0}")]
    Surface(String),

    /// Bad run configuration.
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub fn invalid_factor(msg: impl Into<String>) -> Self {
        Error::InvalidFactor(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
