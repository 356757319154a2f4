use thiserror::Error;

use crate::types::TrajectoryId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid segment: a.ts = {a_ts}, b.ts = {b_ts}, time = {time}")]
    InvalidSegment { a_ts: f64, b_ts: f64, time: f64 },

    #[error("time {t} is outside the sequence span [{first}, {last}]")]
    OutOfRange { t: f64, first: f64, last: f64 },

    #[error("point is already queued")]
    DuplicateEntry,

    #[error("point is not queued")]
    MissingEntry,

    #[error("priority queue is empty")]
    EmptyQueue,

    #[error("priority must not be NaN")]
    NanPriority,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stream out of order: ts {ts} for trajectory {id} after {previous}")]
    Ordering {
        id: TrajectoryId,
        ts: f64,
        previous: f64,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("history gap for trajectory {id}: need raw points covering [{from}, {to}]")]
    HistoryGap {
        id: TrajectoryId,
        from: f64,
        to: f64,
    },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("trajectory {id}: sample spans fewer than two points")]
    DegenerateSpan { id: TrajectoryId },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Usage,
            Error::Invariant(_)
            | Error::DuplicateEntry
            | Error::MissingEntry
            | Error::EmptyQueue
            | Error::NanPriority => ErrorClass::Internal,
            _ => ErrorClass::Data,
        }
    }
}
