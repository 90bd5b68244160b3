use cluster_statevector::{Basis, Gate, OutcomeSource, PureState, QubitInit};

use crate::{Error, OutcomeSequence, ProtocolSpec, Result, StochasticProtocol};

/// Result of running `N` three-qubit protocols side by side on one chain.
#[derive(Debug, Clone)]
pub struct ConcatenatedRun {
    /// Surviving even-indexed qubits after byproduct correction.
    pub state: PureState,
    /// Same qubits before correction.
    pub raw: PureState,
    /// Hamming weight of each protocol's outcome, left to right.
    pub weights: Vec<usize>,
    /// Whole-chain preparations, including the successful one.
    pub attempts: usize,
    pub protocols_applied: usize,
}

/// Chain of `2N+1` qubits with `input` first, entangled once, with every odd
/// qubit measured in the `sigma_x` basis. The whole chain is prepared again
/// until all `N` protocols succeed. A successful protocol leaves `Z^q` on its
/// right-hand survivor, which is undone before returning.
pub fn concatenated_chain(
    input: QubitInit,
    count: usize,
    theta: f64,
    mut source: impl OutcomeSource,
    max_attempts: usize,
) -> Result<ConcatenatedRun> {
    if count == 0 {
        return Err(Error::InvalidArgument("need at least one protocol".into()));
    }
    let protocol = StochasticProtocol::new(ProtocolSpec::new(1, theta)?)?;
    let spec = *protocol.spec();
    let len = 2 * count + 1;
    for attempt in 1..=max_attempts {
        let mut factors = vec![QubitInit::Plus; len];
        factors[0] = input;
        let mut s = PureState::from_product(&factors)?;
        for q in 0..len - 1 {
            s.apply_controlled_phase(q, q + 1, spec.phase(), spec.entangler)?;
        }
        let mut weights = Vec::with_capacity(count);
        let mut all = true;
        for k in 0..count {
            let m = s.measure(2 * k + 1, Basis::X, &mut source)?.outcome;
            let seq = OutcomeSequence::new(vec![m])?;
            all &= protocol.is_success(&seq);
            weights.push(seq.hamming_weight());
        }
        if !all {
            continue;
        }
        let survivors: Vec<usize> = (0..len).step_by(2).collect();
        let raw = s.extract(&survivors)?;
        let mut state = raw.clone();
        for (k, &q) in weights.iter().enumerate() {
            if q % 2 == 1 {
                state.apply(k + 1, Gate::Z)?;
            }
        }
        return Ok(ConcatenatedRun {
            state,
            raw,
            weights,
            attempts: attempt,
            protocols_applied: attempt * count,
        });
    }
    Err(Error::AttemptCap(max_attempts))
}

/// GHZ state from `N` concatenated protocols on a `|+>` input.
pub fn concatenated_ghz(
    count: usize,
    theta: f64,
    source: impl OutcomeSource,
) -> Result<ConcatenatedRun> {
    if count < 2 {
        return Err(Error::InvalidArgument("need at least two protocols".into()));
    }
    concatenated_chain(QubitInit::Plus, count, theta, source, 100_000)
}
