use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("orbit diverged at iteration {iteration}")]
    OrbitDiverged { iteration: usize },

    #[error("tangent frame degenerated at iteration {iteration}")]
    DegenerateTangent { iteration: usize },

    #[error("orbit has {available} samples, {needed} required")]
    InsufficientOrbit { needed: usize, available: usize },

    #[error("keystream mismatch: {0}")]
    KeystreamMismatch(String),

    #[error("OS random source unavailable: {0}")]
    EntropyUnavailable(String),

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedPixelData { expected: usize, found: usize },

    #[error("I/O failure: {0}")]
    IoFailure(#[from] io::Error),

    #[error("degenerate variance: both sequences are constant")]
    DegenerateVariance,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("image too small: {0}")]
    TooSmall(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::OrbitDiverged { .. } => "OrbitDiverged",
            Error::DegenerateTangent { .. } => "DegenerateTangent",
            Error::InsufficientOrbit { .. } => "InsufficientOrbit",
            Error::KeystreamMismatch(_) => "KeystreamMismatch",
            Error::EntropyUnavailable(_) => "EntropyUnavailable",
            Error::InvalidKey(_) => "InvalidKey",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::MalformedHeader(_) => "MalformedHeader",
            Error::TruncatedPixelData { .. } => "TruncatedPixelData",
            Error::IoFailure(_) => "IoFailure",
            Error::DegenerateVariance => "DegenerateVariance",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::TooSmall(_) => "TooSmall",
        }
    }
}
