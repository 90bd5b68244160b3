use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized (norm squared {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("register of {requested} qubits exceeds the cap of {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("outcome {outcome} on qubit {qubit} has probability {probability}")]
    ZeroProbability {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },
    #[error("registers have {left} and {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cut must be a nonempty proper subset of distinct qubits")]
    InvalidCut,
    #[error("state is entangled across the requested cut")]
    NotProduct,
    #[error("forced outcome stream is exhausted")]
    OutcomesExhausted,
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("non-finite value {0}")]
    NonFinite(f64),
}
