use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols} but spaces require {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("subspace basis is rank deficient (tolerance 1e-10)")]
    RankDeficientBasis,
    #[error("exponent must satisfy p >= 1")]
    InvalidExponent,
    #[error("unsupported exponent pair: {0}")]
    UnsupportedExponents(String),
    #[error("weight list too short: need {needed}, got {got}")]
    ShortWeightList { needed: usize, got: usize },
    #[error("net too small: need at least {needed} points, got {got}")]
    NetTooSmall { needed: usize, got: usize },
    #[error("operator kind does not support arbitrary truncation size")]
    FixedSizeOperator,
    #[error("scheme has no declared dual")]
    MissingDualScheme,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
