use thiserror::Error;

/// Errors produced by the codec, channel, analysis and simulation layers.
#[derive(Debug, Error)]
pub enum SpinalError {
    /// A parameter violated its documented domain. `field` names it.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// Square QAM needs an even number of bits per symbol.
    #[error("unsupported modulation order c = {0}: only even c in 2..=16 is supported")]
    UnsupportedModulation(u32),

    #[error("unknown hash_id {name:?}; registered hashes: {registered}")]
    UnknownHash { name: String, registered: String },

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error("observation matrix shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    Shape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("exhaustive decoding of n = {n} bits exceeds the configured cap of {cap} bits")]
    BudgetExceeded { n: usize, cap: usize },

    #[error("sweep csv is missing column {0:?}")]
    MissingColumn(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SpinalError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        SpinalError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input configuration rather than by a
    /// failure while doing the work.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            SpinalError::InvalidParameter { .. }
                | SpinalError::UnsupportedModulation(_)
                | SpinalError::UnknownHash { .. }
                | SpinalError::InvalidMessage(_)
                | SpinalError::MissingColumn(_)
                | SpinalError::Json(_)
        )
    }
}

pub type Result<T, E = SpinalError> = std::result::Result<T, E>;
