use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("{0} and {1} are not adjacent")]
    NotAnEdge(VertexId, VertexId),

    #[error("loop at vertex {0}")]
    Loop(VertexId),

    #[error("label ({row}, {col}) is used twice")]
    DuplicateLabel { row: u32, col: u32 },

    #[error("size limit exceeded: {what} has {actual}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("search budget of {0} states exhausted")]
    Budget(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An algebraic identity the reductions rely on did not hold. This is a
    /// bug, not an input problem.
    #[error("internal check failed: {0}")]
    CheckFailed(String),

    #[error("replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid {what}: {msg}")]
    Invalid { what: &'static str, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn check(msg: impl Into<String>) -> Self {
        Error::CheckFailed(msg.into())
    }
}
