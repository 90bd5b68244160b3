use std::collections::BTreeSet;
use std::f64::consts::PI;

use cluster_statevector::QubitInit;

use crate::chain::{build_imperfect_chain, enumerate_branches};
use crate::sequence::check_size;
use crate::{OutcomeSequence, ProtocolSpec, Result};

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(n, (n+1)/2) cos^{n+1}(theta/2) / 2^n`.
pub fn success_probability_closed(n: usize, theta: f64) -> Result<f64> {
    check_size(n)?;
    let c = (theta / 2.0).cos();
    Ok(binomial(n, n.div_ceil(2)) * c.powi(n as i32 + 1) / 2f64.powi(n as i32))
}

/// Large-`n` form `sqrt(2/(pi n)) cos^{n+1}(theta/2)`.
pub fn success_probability_asymptotic(n: usize, theta: f64) -> Result<f64> {
    check_size(n)?;
    let c = (theta / 2.0).cos();
    Ok((2.0 / (PI * n as f64)).sqrt() * c.powi(n as i32 + 1))
}

/// Total branch probability over `successes` for a fresh chain with `input`.
pub fn success_probability_oracle(
    spec: &ProtocolSpec,
    input: QubitInit,
    successes: &BTreeSet<OutcomeSequence>,
) -> Result<f64> {
    let chain = build_imperfect_chain(input, spec)?;
    Ok(enumerate_branches(&chain, spec.n)?
        .iter()
        .filter(|b| successes.contains(&b.outcomes))
        .map(|b| b.probability)
        .sum())
}
