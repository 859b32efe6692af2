use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("window too short: need at least {needed} samples, got {got}")]
    WindowTooShort { needed: usize, got: usize },

    #[error("CSV parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PipelineError>;
