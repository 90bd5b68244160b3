use cluster_statevector::{PureState, QubitInit, C64};

use crate::chain::{build_imperfect_chain, chain_with_ends, enumerate_branches};
use crate::{binomial, OutcomeSequence, ProtocolSpec, Result, StochasticProtocol};

/// Success probability after `N` consecutive failures, for `N = 0..`.
#[derive(Debug, Clone, PartialEq)]
pub struct RetryTable {
    pub n: usize,
    pub theta: f64,
    pub per_failure: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// Probability of having failed every attempt in the table.
    pub unresolved: f64,
    /// `C(n, (n+1)/2) / 2^n`.
    pub single_shot_limit: f64,
}

impl RetryTable {
    fn new(n: usize, theta: f64, per_failure: Vec<f64>, unresolved: f64) -> Self {
        let cumulative = per_failure
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        RetryTable {
            n,
            theta,
            per_failure,
            cumulative,
            unresolved,
            single_shot_limit: binomial(n, n.div_ceil(2)) / 2f64.powi(n as i32),
        }
    }

    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Amplitudes `<a, outcomes, c| U |a, +...+, c>` for end basis states
/// `ac = 00, 01, 10, 11`. The entangler is diagonal, so these four numbers are
/// the whole Kraus operator the branch applies to the end pair.
pub fn end_pair_kraus(spec: &ProtocolSpec, outcomes: &OutcomeSequence) -> Result<[C64; 4]> {
    let mut k = [C64::new(0.0, 0.0); 4];
    for (e, slot) in k.iter_mut().enumerate() {
        let (a, c) = (basis(e >> 1), basis(e & 1));
        let chain = chain_with_ends(&PureState::from_product(&[a, c])?, spec)?;
        let mut bra = vec![a];
        bra.extend(outcomes.bits().iter().map(|&b| {
            if b == 1 {
                QubitInit::Minus
            } else {
                QubitInit::Plus
            }
        }));
        bra.push(c);
        *slot = PureState::from_product(&bra)?.inner(&chain)?;
    }
    Ok(k)
}

fn basis(bit: usize) -> QubitInit {
    if bit == 1 {
        QubitInit::One
    } else {
        QubitInit::Zero
    }
}

/// Exact retry statistics for a chain started with `|+>` ends. Each branch
/// multiplies the end-pair populations by `|k|^2`, so populations alone carry
/// the full history.
pub fn retry_probabilities(n: usize, theta: f64, max_failures: usize) -> Result<RetryTable> {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(n, theta)?)?;
    let spec = *protocol.spec();
    let mut succeed = [0.0; 4];
    let mut fail = [0.0; 4];
    for index in 0..1usize << n {
        let seq = OutcomeSequence::from_index(index, n);
        let k = end_pair_kraus(&spec, &seq)?;
        let target = if protocol.is_success(&seq) {
            &mut succeed
        } else {
            &mut fail
        };
        for (t, amp) in target.iter_mut().zip(k) {
            *t += amp.norm_sqr();
        }
    }
    let mut w = [0.25; 4];
    let mut per_failure = Vec::with_capacity(max_failures + 1);
    for _ in 0..=max_failures {
        per_failure.push(w.iter().zip(succeed).map(|(w, s)| w * s).sum());
        for (w, f) in w.iter_mut().zip(fail) {
            *w *= f;
        }
    }
    Ok(RetryTable::new(n, theta, per_failure, w.iter().sum()))
}

/// Same statistics by explicit pure-state enumeration of failure histories,
/// dropping paths whose probability falls below `cutoff`.
pub fn retry_probabilities_by_branches(
    n: usize,
    theta: f64,
    max_failures: usize,
    cutoff: f64,
) -> Result<RetryTable> {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(n, theta)?)?;
    let spec = *protocol.spec();
    let mut per_failure = vec![0.0; max_failures + 1];
    let mut unresolved = 0.0;
    let mut frontier = vec![(build_imperfect_chain(QubitInit::Plus, &spec)?, 1.0)];
    for (depth, slot) in per_failure.iter_mut().enumerate() {
        let mut next = Vec::new();
        for (chain, weight) in frontier {
            for b in enumerate_branches(&chain, n)? {
                let p = weight * b.probability;
                if protocol.is_success(&b.outcomes) {
                    *slot += p;
                } else if depth < max_failures && p > cutoff {
                    next.push((chain_with_ends(&b.end_pair, &spec)?, p));
                } else {
                    unresolved += p;
                }
            }
        }
        frontier = next;
    }
    Ok(RetryTable::new(n, theta, per_failure, unresolved))
}
