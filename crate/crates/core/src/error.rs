use thiserror::Error;

use crate::bijection::Trace;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid overline: {0}")]
    InvalidOverline(String),

    #[error("row {row}, position {index} is out of range")]
    OutOfRange { row: usize, index: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no starting type applies at row-2 index {index}")]
    Untyped { index: usize },

    #[error("no group clause matches at row-2 index {index} ({kind} types)")]
    UntypedGroup { kind: &'static str, index: usize },

    #[error("classification integrity: {0}")]
    Integrity(String),

    #[error("not a member: {0}")]
    NotMember(String),

    #[error("surgery target missing: no part {value} with mark {mark}")]
    TargetMissing { value: i64, mark: usize },

    #[error("{source} (after {} trace steps)", trace.steps.len())]
    WithTrace {
        #[source]
        source: Box<Error>,
        trace: Trace,
    },

    #[error("series error: {0}")]
    Series(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn with_trace(self, trace: Trace) -> Error {
        match self {
            e @ Error::WithTrace { .. } => e,
            e => Error::WithTrace { source: Box::new(e), trace },
        }
    }
}
