use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("graph is not 2-vertex-connected")]
    NotTwoVertexConnected,
    #[error("odd number of terminals ({0})")]
    OddTerminals(usize),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid ear decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! internal {
    ($($arg:tt)*) => { $crate::error::Error::Internal(format!($($arg)*)) };
}
pub(crate) use internal;
