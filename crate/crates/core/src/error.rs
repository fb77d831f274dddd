use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(eta)")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element cap of {cap} exceeded during enumeration")]
    ResourceLimit { cap: usize },

    #[error("element of word {word} is not in the ball of radius {radius}")]
    NotInBall { word: String, radius: String },

    #[error("sample point {point} lies beyond table radius {radius}")]
    BeyondRadius { point: String, radius: String },

    #[error("table too small: {0}")]
    TableTooSmall(String),

    #[error("degenerate samples: {0}")]
    Degenerate(String),

    #[error("leaf budget at n = {n} is within 2^-{bits} of an integer boundary")]
    PrecisionAmbiguity { n: String, bits: u32 },

    #[error("malformed code tree: {0}")]
    MalformedTree(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("corrupt table file: {0}")]
    CorruptFile(String),

    #[error("unsupported table format version {found} (expected {expected})")]
    VersionMismatch { found: String, expected: u32 },

    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
