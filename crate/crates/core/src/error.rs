use thiserror::Error;

/// Errors produced by the synthesis, impairment, dataset and measurement code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frame must hold exactly {expected} samples, got {got}")]
    FrameLength { expected: usize, got: usize },

    #[error("frame contains non-finite samples")]
    NonFinite,

    #[error("input too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("empty input")]
    Empty,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown signal class `{0}`")]
    UnknownClass(String),

    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("no dominant tone in spectrum")]
    NoDominantTone,

    #[error("zero variance")]
    ZeroVariance,

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
