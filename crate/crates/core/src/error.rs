use thiserror::Error;

use crate::decomp::Violation;
use crate::sgraph::ModelViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("edge sequence is not a simple cycle: {0}")]
    NotACycle(String),

    #[error("graphs do not share the same underlying multigraph")]
    GraphMismatch,

    #[error("invalid matrix: {0}")]
    Matrix(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("{what} exceeds limit {limit}")]
    SizeLimit { what: String, limit: u128 },

    #[error("invalid decomposition: {}", join_violations(.0))]
    InvalidDecomposition(Vec<Violation>),

    #[error("decomposition mismatch: {0}")]
    Decomposition(String),

    #[error("invalid model: {0}")]
    Model(ModelViolation),

    #[error("invalid coloring: {0}")]
    Coloring(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn limit(what: impl Into<String>, limit: u128) -> Self {
        Error::SizeLimit { what: what.into(), limit }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
