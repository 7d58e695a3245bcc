use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two points that must be separated coincide (zero path length).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    /// Interference plus noise vanished, so the SINR would be unbounded.
    #[error("unbounded capacity: interference plus noise is zero at {0}")]
    InfiniteCapacity(&'static str),

    #[error("scenario file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("partition of {0} elements is too large to enumerate")]
    PartitionTooLarge(usize),

    #[error("codebook is empty")]
    EmptyCodebook,

    #[error("no feasible power split: {0}")]
    NoFeasibleSplit(String),

    #[error("oracle failure: {0}")]
    Oracle(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
