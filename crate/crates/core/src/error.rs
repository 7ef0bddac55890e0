use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("embedding dimension must be at least 1, got {0}")]
    InvalidDimension(i64),

    #[error("time delay must be at least 1, got {0}")]
    InvalidDelay(i64),

    #[error("series of length {len} is too short for d={d}, tau={tau} (m = {m})")]
    SeriesTooShort { len: i64, d: i64, tau: i64, m: i64 },

    #[error("m = {m} columns with tau = {tau} leaves samples out of the trajectory matrix (need m >= tau when d > 1)")]
    IncompleteEmbedding { m: i64, tau: i64 },

    #[error("index convention must be 0 or 1, got {0}")]
    InvalidConvention(i64),

    #[error("time series must contain at least one sample")]
    EmptySeries,

    #[error("sample at logical index {index} is not finite")]
    NonFiniteSample { index: i64 },

    #[error("index {index} outside valid range [{lo}, {hi}]")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("invalid rectangle ({alpha1}, {alpha2}, {beta1}, {beta2})")]
    InvalidRectangle {
        alpha1: i64,
        alpha2: i64,
        beta1: i64,
        beta2: i64,
    },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("components do not share one embedding configuration")]
    ConfigMismatch,

    #[error("no components supplied")]
    EmptyInput,

    #[error("legacy averaging is only valid for s=1, tau=1 (got s={s}, tau={tau}); pass force to run it anyway")]
    LegacyModeUnsafe { s: i64, tau: i64 },

    #[error("component label {0} appears in more than one group")]
    OverlappingGroups(usize),

    #[error("decomposition backend `{0}` is not available")]
    UnsupportedBackend(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// Stable identifier for machine-readable error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::InvalidDelay(_) => "InvalidDelay",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::IncompleteEmbedding { .. } => "IncompleteEmbedding",
            Error::InvalidConvention(_) => "InvalidConvention",
            Error::EmptySeries => "EmptySeries",
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidRectangle { .. } => "InvalidRectangle",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::ConfigMismatch => "ConfigMismatch",
            Error::EmptyInput => "EmptyInput",
            Error::LegacyModeUnsafe { .. } => "LegacyModeUnsafe",
            Error::OverlappingGroups(_) => "OverlappingGroups",
            Error::UnsupportedBackend(_) => "UnsupportedBackend",
            Error::NumericalFailure(_) => "NumericalFailure",
        }
    }
}
