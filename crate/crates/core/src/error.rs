use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("vertex id {0} out of range (n = {1})")]
    InvalidVertex(usize, usize),

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("unknown {kind} name '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("formula has wrong free variables: expected {expected}, got {got}")]
    Arity { expected: String, got: String },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("formula is not symmetric on the domain: differs at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("formula is not irreflexive on the domain: holds at ({0}, {0})")]
    NotIrreflexive(usize),

    #[error("no duality of order <= {0} on either side")]
    NoDuality(usize),

    #[error("ball around vertex {vertex} has {size} vertices, exceeding the budget {budget}")]
    BallTooLarge {
        vertex: usize,
        size: usize,
        budget: usize,
    },

    #[error("k-expression: {0}")]
    KExpression(String),

    #[error("candidate enumeration rejected: s = {0} exceeds the exhaustive cap {1}")]
    CandidateCap(usize, usize),

    #[error("candidate ({0}) disagrees with the oracle: kernel={1}, oracle={2}")]
    CandidateDisagreement(String, bool, bool),

    #[error("distance atoms are not part of the plain graph signature accepted here")]
    DistAtomRejected,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
