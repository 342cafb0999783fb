use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node index {0} out of range")]
    InvalidNode(usize),

    #[error("edge index {0} out of range")]
    InvalidEdge(usize),

    #[error("smoothing parameter {0} outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("node {0} has no neighbors and cannot move probability mass")]
    IsolatedNode(usize),

    #[error("transport between mutually unreachable supports")]
    InfiniteCost,

    #[error("nodes {0} and {1} lie in different components")]
    InfiniteDistance(usize, usize),

    #[error("diameter unavailable: hypergraph is disconnected")]
    DiameterUnavailable,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid generator specification: {0}")]
    Spec(String),

    #[error("feature distribution is empty after dropping undefined values")]
    EmptyFeature,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
