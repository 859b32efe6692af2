use thiserror::Error;

/// Errors produced by tensor construction, network evaluation, and optimization.
#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch at layer {layer} ({kind}): expected {expected}, got {got}")]
    ShapeMismatch {
        layer: usize,
        kind: String,
        expected: String,
        got: String,
    },

    #[error("tensor shape {shape:?} implies {expected} elements, data has {got}")]
    ShapeDataMismatch {
        shape: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: String, index: usize },

    #[error("backward called without a cached forward pass")]
    NoCachedForward,

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parameter vector length {got} does not match network parameter count {expected}")]
    ParamCountMismatch { expected: usize, got: usize },

    #[error("checkpoint serialization failed: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, NnError>;
