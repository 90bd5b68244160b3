use cluster_statevector::{Basis, PureState, QubitInit, C64, PROB_TOL};

use crate::sequence::check_size;
use crate::{Error, OutcomeSequence, ProtocolSpec, Result};

/// `(n+2)`-qubit chain with `input` on qubit 0, `|+>` elsewhere, entangled
/// pairwise left to right.
pub fn build_imperfect_chain(input: QubitInit, spec: &ProtocolSpec) -> Result<PureState> {
    check_size(spec.n)?;
    let mut factors = vec![QubitInit::Plus; spec.n + 2];
    factors[0] = input;
    let mut s = PureState::from_product(&factors)?;
    entangle(&mut s, spec)?;
    Ok(s)
}

/// Chain whose end qubits 0 and `n+1` carry the two-qubit state `ends`.
pub fn chain_with_ends(ends: &PureState, spec: &ProtocolSpec) -> Result<PureState> {
    check_size(spec.n)?;
    if ends.num_qubits() != 2 {
        return Err(Error::WrongQubitCount {
            expected: 2,
            got: ends.num_qubits(),
        });
    }
    let n = spec.n;
    let mids = 1usize << n;
    let scale = (mids as f64).sqrt().recip();
    let mut amps = vec![C64::new(0.0, 0.0); 4 * mids];
    for (e, amp) in ends.amplitudes().iter().enumerate() {
        let (a, c) = (e >> 1, e & 1);
        for m in 0..mids {
            amps[(a << (n + 1)) | (m << 1) | c] = amp * scale;
        }
    }
    let mut s = PureState::from_amplitudes(amps)?;
    entangle(&mut s, spec)?;
    Ok(s)
}

fn entangle(s: &mut PureState, spec: &ProtocolSpec) -> Result<()> {
    for q in 0..=spec.n {
        s.apply_controlled_phase(q, q + 1, spec.phase(), spec.entangler)?;
    }
    Ok(())
}

/// One outcome branch of the middle-qubit measurements.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcomes: OutcomeSequence,
    pub probability: f64,
    pub end_pair: PureState,
}

/// Every nonvanishing outcome branch of a chain built by this module, in
/// sequence order.
pub fn enumerate_branches(chain: &PureState, n: usize) -> Result<Vec<Branch>> {
    check_size(n)?;
    if chain.num_qubits() != n + 2 {
        return Err(Error::WrongQubitCount {
            expected: n + 2,
            got: chain.num_qubits(),
        });
    }
    let mut out = Vec::with_capacity(1 << n);
    let mut bits = Vec::with_capacity(n);
    descend(chain.clone(), 1.0, n, &mut bits, &mut out)?;
    Ok(out)
}

fn descend(
    state: PureState,
    prob: f64,
    n: usize,
    bits: &mut Vec<u8>,
    out: &mut Vec<Branch>,
) -> Result<()> {
    let depth = bits.len();
    if depth == n {
        out.push(Branch {
            outcomes: OutcomeSequence::new(bits.clone())?,
            probability: prob,
            end_pair: state.extract(&[0, n + 1])?,
        });
        return Ok(());
    }
    for m in 0..2u8 {
        let p = state.outcome_probability(depth + 1, Basis::X, m)?;
        if p <= PROB_TOL {
            continue;
        }
        let mut next = state.clone();
        next.project(depth + 1, Basis::X, m)?;
        bits.push(m);
        descend(next, prob * p, n, bits, out)?;
        bits.pop();
    }
    Ok(())
}
