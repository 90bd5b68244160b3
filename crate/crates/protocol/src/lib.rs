//! The n-qubit stochastic measurement protocol.
//!
//! An odd number `n` of `|+>` qubits sits between two end qubits, the whole
//! chain is entangled with `CSX_{pi+theta}` for an unknown systematic error
//! `theta`, and the middle qubits are measured in the `sigma_x` basis. Certain
//! outcome sequences leave the end pair in a perfect two-qubit cluster state,
//! independent of `theta`.

mod chain;
mod error;
mod ghz;
mod probability;
mod retry;
mod run;
mod sequence;
mod teleport;

pub use chain::{build_imperfect_chain, chain_with_ends, enumerate_branches, Branch};
pub use error::{Error, Result};
pub use ghz::{concatenated_chain, concatenated_ghz, ConcatenatedRun};
pub use probability::{
    binomial, success_probability_asymptotic, success_probability_closed,
    success_probability_oracle,
};
pub use retry::{
    end_pair_kraus, retry_probabilities, retry_probabilities_by_branches, RetryTable,
};
pub use run::{predicted_end_pair, ProtocolRun, StochasticProtocol};
pub use sequence::{
    enumerate_success_sequences, probe_inputs, rule_based_sequences, OutcomeSequence,
    ProtocolSpec, PROBE_THETA,
};
pub use teleport::{
    average_teleport_infidelity, ideal_teleport_output, one_bit_teleport, stochastic_teleport,
    Estimate, StochasticTeleport, Teleported,
};
