use std::path::PathBuf;

/// Errors produced by the distance kernels, the network and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),

    #[error("empty input")]
    Empty,

    #[error("sample is not sorted ascending at position {0}")]
    Unsorted(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("direction {index} is not a unit vector (norm {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("unknown distance kind `{0}`")]
    UnknownDistance(String),

    #[error("unknown synthetic dataset kind `{0}`")]
    UnknownDatasetKind(String),

    #[error("non-finite gradient during step {step}: {what}")]
    NonFiniteGradient { step: u64, what: String },

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("idx: bad magic number {found:#010x}, expected {expected:#010x}")]
    IdxMagic { found: u32, expected: u32 },

    #[error("idx: truncated file, need {needed} bytes, have {available}")]
    IdxTruncated { needed: usize, available: usize },

    #[error("idx: dimension mismatch: {0}")]
    IdxDimension(String),

    #[error("csv line {line}: {reason}")]
    Csv { line: usize, reason: String },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
