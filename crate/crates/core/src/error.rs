use thiserror::Error;

/// Errors raised by the workbench library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bad arguments: out-of-range parameters, mismatched shapes, unknown ids.
    #[error("usage error: {0}")]
    Usage(String),
    /// An instance exceeds the brute-force dimension guard.
    #[error("size cap exceeded: lifted dimension {dim} > {cap}")]
    SizeCap { dim: usize, cap: usize },
    /// A construction hit a numerically degenerate case and refused to guess.
    #[error("degenerate construction: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
