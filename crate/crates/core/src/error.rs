use thiserror::Error;

/// Errors produced anywhere in the embedding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("no non-isomorphic degree-preserving rewiring found after {attempts} attempts")]
    ExhaustedAttempts { attempts: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("inconsistent cut oracle at pair ({u}, {v}): extracted coefficient {value}")]
    InconsistentOracle { u: usize, v: usize, value: i64 },

    #[error("base graph is disconnected")]
    DisconnectedBase,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("{n} qubits exceeds the simulator ceiling of {ceiling}")]
    SizeCeiling { n: usize, ceiling: usize },

    #[error("index {index} out of range for {n} qubits")]
    OutOfRange { index: usize, n: usize },

    #[error("negative probability {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("histogram has {available} shots, {needed} required")]
    InsufficientShots { needed: u64, available: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
