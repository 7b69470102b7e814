use thiserror::Error;

/// Errors produced by the coupon-collector stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector length {0} is outside the supported range 1..=64")]
    UnsupportedWidth(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("value {value:#b} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },
    #[error("element 0 encodes the identity string and cannot mark a missing element")]
    ZeroElement,
    #[error("invalid coupon instance: {0}")]
    InvalidInstance(String),
    #[error("{what} requires at most {max} qubits, got {got}")]
    TooManyQubits {
        what: &'static str,
        max: usize,
        got: usize,
    },
    #[error("post-selection failed after {0} attempts")]
    PostSelectionFailed(usize),
    #[error("no Bell records to estimate from")]
    EmptyRecords,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
