use std::collections::BTreeSet;

use cluster_statevector::{Basis, Forced, OutcomeSource, PureState, QubitInit, C64, PROB_TOL};

use crate::chain::{build_imperfect_chain, chain_with_ends};
use crate::sequence::enumerate_success_sequences_with;
use crate::{Error, OutcomeSequence, ProtocolSpec, Result, PROBE_THETA};

/// Ideal end pair after a success of Hamming weight `q` on ends `ends`:
/// `(alpha|00> + (-1)^q delta|11>)` renormalized.
pub fn predicted_end_pair(ends: &PureState, q: usize) -> Result<PureState> {
    if ends.num_qubits() != 2 {
        return Err(Error::WrongQubitCount {
            expected: 2,
            got: ends.num_qubits(),
        });
    }
    let a = ends.amplitudes();
    let weight = a[0].norm_sqr() + a[3].norm_sqr();
    if weight <= PROB_TOL {
        return Err(Error::DegenerateInput { weight });
    }
    let sign = if q % 2 == 1 { -1.0 } else { 1.0 };
    let zero = C64::new(0.0, 0.0);
    Ok(PureState::normalized(vec![a[0], zero, zero, a[3] * sign])?)
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub spec: ProtocolSpec,
    pub outcomes: OutcomeSequence,
    pub success: bool,
    pub end_pair: PureState,
    pub path_probability: f64,
}

/// A protocol of fixed size together with its certified success sequences.
#[derive(Debug, Clone)]
pub struct StochasticProtocol {
    spec: ProtocolSpec,
    successes: BTreeSet<OutcomeSequence>,
}

impl StochasticProtocol {
    pub fn new(spec: ProtocolSpec) -> Result<Self> {
        let successes = enumerate_success_sequences_with(spec.n, PROBE_THETA, spec.entangler)?;
        Ok(StochasticProtocol { spec, successes })
    }

    pub fn spec(&self) -> &ProtocolSpec {
        &self.spec
    }

    pub fn successes(&self) -> &BTreeSet<OutcomeSequence> {
        &self.successes
    }

    pub fn is_success(&self, outcomes: &OutcomeSequence) -> bool {
        self.successes.contains(outcomes)
    }

    /// Runs the protocol on a fresh chain carrying `input` on its first qubit.
    pub fn run(&self, input: QubitInit, source: impl OutcomeSource) -> Result<ProtocolRun> {
        let chain = build_imperfect_chain(input, &self.spec)?;
        self.measure(chain, source)
    }

    pub fn run_forced(&self, input: QubitInit, outcomes: &OutcomeSequence) -> Result<ProtocolRun> {
        self.check_len(outcomes)?;
        self.run(input, Forced::new(outcomes.bits().iter().copied()))
    }

    /// Re-runs the protocol between end qubits already holding `ends`.
    pub fn retry(&self, ends: &PureState, source: impl OutcomeSource) -> Result<ProtocolRun> {
        predicted_end_pair(ends, 0)?;
        let chain = chain_with_ends(ends, &self.spec)?;
        self.measure(chain, source)
    }

    pub fn retry_forced(&self, ends: &PureState, outcomes: &OutcomeSequence) -> Result<ProtocolRun> {
        self.check_len(outcomes)?;
        self.retry(ends, Forced::new(outcomes.bits().iter().copied()))
    }

    fn check_len(&self, outcomes: &OutcomeSequence) -> Result<()> {
        if outcomes.len() != self.spec.n {
            return Err(Error::SequenceLength {
                expected: self.spec.n,
                got: outcomes.len(),
            });
        }
        Ok(())
    }

    fn measure(&self, mut chain: PureState, mut source: impl OutcomeSource) -> Result<ProtocolRun> {
        let n = self.spec.n;
        let mut bits = Vec::with_capacity(n);
        let mut path_probability = 1.0;
        for q in 1..=n {
            let rec = chain.measure(q, Basis::X, &mut source)?;
            path_probability *= rec.probability;
            bits.push(rec.outcome);
        }
        let outcomes = OutcomeSequence::new(bits)?;
        Ok(ProtocolRun {
            spec: self.spec,
            success: self.is_success(&outcomes),
            outcomes,
            end_pair: chain.extract(&[0, n + 1])?,
            path_probability,
        })
    }
}
