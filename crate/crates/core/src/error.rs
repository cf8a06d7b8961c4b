use std::io;

/// Errors produced by graph ingestion, ranking and the experiment harnesses.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("node {node} has degree zero")]
    ZeroDegree { node: usize },

    #[error("{name} out of range {range}")]
    OutOfRange { name: &'static str, range: &'static str },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("maximal clique enumeration exceeded the cap of {limit} cliques")]
    CliqueLimit { limit: usize },

    #[error("invalid simplicial cover: {0}")]
    InvalidCover(String),

    #[error("invalid removal order: {0}")]
    InvalidOrder(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
