use std::path::PathBuf;

/// Crate-wide error type. The CLI maps variants onto exit codes:
/// configuration problems exit 2, capacity overruns exit 3, anything else 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {requested}, cap is {cap}")]
    Capacity {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence file {path}: {reason}")]
    SequenceFile { path: PathBuf, reason: String },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("first-occurrence horizon is {horizon}, need at least {requested}")]
    Horizon { horizon: u32, requested: u32 },
    #[error("spectrum has {have} entries, need {need}")]
    InsufficientEntries { have: usize, need: usize },
    #[error("exact spectrum collision among the first {within} entries")]
    SpectrumCollision { within: usize },
    #[error("all input sets have measure zero")]
    ZeroMeasure,
    #[error("envelope {0} requires the sequence size a_N")]
    MissingSequenceSize(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::InvalidParameter(_)
            | Error::SequenceFile { .. }
            | Error::Config(_)
            | Error::MissingSequenceSize(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
