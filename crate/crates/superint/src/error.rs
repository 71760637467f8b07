use thiserror::Error;

/// Everything that maps to exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(#[from] superint_core::Error),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}
