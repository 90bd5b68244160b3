use cluster_statevector::QubitInit;

use crate::{Error, Result};

/// Initial states for a register of `total` qubits holding `(n + 2)`-qubit
/// chains at `starts`, such that one global `CSX` entangles only the chains.
///
/// Chain qubits are `|+>`. The qubit after a chain is `|1>` and every other
/// separator is `|0>`, so each boundary pair has the form `|chi>|1>` or
/// `|0>|chi>` and picks up no phase.
pub fn selective_layout(total: usize, starts: &[usize], n: usize) -> Result<Vec<QubitInit>> {
    let len = n + 2;
    let mut sorted = starts.to_vec();
    sorted.sort_unstable();
    for &s in &sorted {
        if s + len > total {
            return Err(Error::ChainOutOfRange(s));
        }
    }
    for w in sorted.windows(2) {
        let gap = w[1] as isize - (w[0] + len) as isize;
        if gap < 0 || w[0] == w[1] {
            return Err(Error::OverlappingChains(w[0], w[1]));
        }
        if gap < 2 {
            return Err(Error::InsufficientSeparation(w[0], w[1]));
        }
    }
    let mut out = vec![QubitInit::Zero; total];
    for &s in &sorted {
        out[s..s + len].fill(QubitInit::Plus);
        if s + len < total {
            out[s + len] = QubitInit::One;
        }
    }
    Ok(out)
}
