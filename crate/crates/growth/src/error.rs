use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    State(#[from] cluster_statevector::Error),
    #[error(transparent)]
    Protocol(#[from] cluster_protocol::Error),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is detached")]
    Detached(NodeId),
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("node {0} is not interior to a linear segment")]
    NotLinear(NodeId),
    #[error("nodes {0} and {1} are not neighbours")]
    NotNeighbor(NodeId, NodeId),
    #[error("nodes {0} and {1} are already linked")]
    Adjacent(NodeId, NodeId),
    #[error("self edge on {0}")]
    SelfEdge(NodeId),
    #[error("node {0} carries an unresolved Hadamard")]
    PendingHadamard(NodeId),
    #[error("chains starting at {0} and {1} overlap")]
    OverlappingChains(usize, usize),
    #[error("chains starting at {0} and {1} need at least two separator qubits")]
    InsufficientSeparation(usize, usize),
    #[error("chain starting at {0} does not fit in the register")]
    ChainOutOfRange(usize),
    #[error("retry cap of {0} protocol applications exceeded")]
    RetryCapExceeded(usize),
    #[error("mean length gain {0} is not positive")]
    NoNetGrowth(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
