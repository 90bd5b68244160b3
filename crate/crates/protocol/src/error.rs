use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    State(#[from] cluster_statevector::Error),
    #[error("protocol size must be odd and at least 1, got {0}")]
    InvalidSize(usize),
    #[error("outcome sequence has {got} bits, expected {expected}")]
    SequenceLength { expected: usize, got: usize },
    #[error("end pair has weight {weight} on |00> and |11>, no success is possible")]
    DegenerateInput { weight: f64 },
    #[error("expected a {expected}-qubit state, got {got} qubits")]
    WrongQubitCount { expected: usize, got: usize },
    #[error("no success after {0} attempts")]
    AttemptCap(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
