use alloc::string::String;

/// Errors raised by the streaming pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid event: {0}")]
    Validation(String),
    #[error("out-of-order event for {entity}: {ts} precedes {last}")]
    Ordering { entity: String, ts: i64, last: i64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("event {0} has no label")]
    Unlabeled(String),
    #[error("requested {requested} samples of class {class} but only {available} exist")]
    NotEnoughSamples {
        class: u8,
        requested: usize,
        available: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operation not supported by model {0}")]
    UnsupportedModel(&'static str),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = core::result::Result<T, Error>;
