use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable x{} is not assigned", .0 + 1)]
    MissingVariable(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the supported maximum of 8")]
    DimensionTooLarge(usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("unknown algebra: {0}")]
    UnknownAlgebra(String),
    #[error("not a Lie algebra automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    #[error("field lists differ")]
    IncompatibleFields,
    #[error("branch {label} invalid: {reason}")]
    BranchInvalid { label: String, reason: String },
    #[error("golden data missing: {0}")]
    GoldenDataMissing(String),
    #[error("witness missing: {0}")]
    WitnessMissing(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
