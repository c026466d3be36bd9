use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("edge ({u}, {v}) has non-positive length {length}")]
    InvalidLength { u: VertexId, v: VertexId, length: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("{what} budget exceeded: needed {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: usize,
        limit: usize,
    },

    #[error("{0} must be nonempty")]
    EmptySet(&'static str),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {vertex} is not a member of coned set {set}")]
    NotAMember { set: usize, vertex: VertexId },

    #[error("cone set ids do not match: {0}")]
    IndexMismatch(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("automorphism inverse not found within radius {radius}: {detail}")]
    PhiInverse { radius: usize, detail: String },

    #[error("coset has no counterpart in the target ball: {0}")]
    UnmatchedCoset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: usize, limit: usize) -> Self {
        Error::BudgetExceeded { what, needed, limit }
    }
}
