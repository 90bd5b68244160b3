use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use cluster_statevector::{Entangler, PureState, QubitInit, C64};

use crate::chain::{build_imperfect_chain, enumerate_branches};
use crate::run::predicted_end_pair;
use crate::{Error, Result};

/// Generic angle at which the success oracle probes the protocol.
pub const PROBE_THETA: f64 = 1.2345;

/// Fidelity a branch must reach on every probe to count as a success.
const ORACLE_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub n: usize,
    pub theta: f64,
    pub entangler: Entangler,
}

impl ProtocolSpec {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        Self::with_entangler(n, theta, Entangler::Csx)
    }

    pub fn with_entangler(n: usize, theta: f64, entangler: Entangler) -> Result<Self> {
        check_size(n)?;
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!("theta = {theta}")));
        }
        if ((theta - PI).rem_euclid(2.0 * PI)).min((PI - theta).rem_euclid(2.0 * PI)) < 1e-9 {
            log::warn!("theta = pi gives zero success probability");
        }
        Ok(ProtocolSpec {
            n,
            theta,
            entangler,
        })
    }

    /// Phase of each imperfect entangler.
    pub fn phase(&self) -> f64 {
        PI + self.theta
    }
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidSize(n));
    }
    Ok(())
}

/// Outcomes of the middle-qubit measurements, left to right. Bit 1 is `|->`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeSequence(Vec<u8>);

impl OutcomeSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument("bits must be 0 or 1".into()));
        }
        Ok(OutcomeSequence(bits))
    }

    pub fn from_index(index: usize, len: usize) -> Self {
        OutcomeSequence((0..len).map(|k| ((index >> (len - 1 - k)) & 1) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    fn concat(parts: &[&[u8]]) -> Self {
        OutcomeSequence(parts.concat())
    }
}

impl fmt::Display for OutcomeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidArgument(format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(OutcomeSequence)
    }
}

/// Input states whose images fix a linear map on one qubit up to phase.
pub fn probe_inputs() -> [QubitInit; 4] {
    let h = FRAC_1_SQRT_2;
    [
        QubitInit::Zero,
        QubitInit::One,
        QubitInit::Plus,
        QubitInit::Amplitudes(C64::new(h, 0.0), C64::new(0.0, h)),
    ]
}

/// Sequences after which every probe input ends in the ideal cluster pair.
pub fn enumerate_success_sequences(n: usize, probe_theta: f64) -> Result<BTreeSet<OutcomeSequence>> {
    enumerate_success_sequences_with(n, probe_theta, Entangler::Csx)
}

pub(crate) fn enumerate_success_sequences_with(
    n: usize,
    probe_theta: f64,
    entangler: Entangler,
) -> Result<BTreeSet<OutcomeSequence>> {
    let spec = ProtocolSpec::with_entangler(n, probe_theta, entangler)?;
    let mut passes: BTreeMap<OutcomeSequence, usize> = BTreeMap::new();
    let probes = probe_inputs();
    for input in &probes {
        let chain = build_imperfect_chain(*input, &spec)?;
        let ends = PureState::from_product(&[*input, QubitInit::Plus])?;
        for branch in enumerate_branches(&chain, n)? {
            let want = predicted_end_pair(&ends, branch.outcomes.hamming_weight())?;
            if branch.end_pair.fidelity(&want)? >= ORACLE_FIDELITY {
                *passes.entry(branch.outcomes).or_default() += 1;
            }
        }
    }
    Ok(passes
        .into_iter()
        .filter(|&(_, count)| count == probes.len())
        .map(|(seq, _)| seq)
        .collect())
}

/// Sequences generated from `1` by the two construction rules: sandwich an
/// odd-weight success between a pair of zeros, or join two successes with an
/// arbitrary bit.
pub fn rule_based_sequences(n: usize) -> Result<BTreeSet<OutcomeSequence>> {
    check_size(n)?;
    let mut by_len: Vec<BTreeSet<OutcomeSequence>> = vec![BTreeSet::new(); n + 1];
    by_len[1].insert(OutcomeSequence(vec![1]));
    for len in (3..=n).step_by(2) {
        let mut set = BTreeSet::new();
        for s in &by_len[len - 2] {
            if s.hamming_weight() % 2 == 1 {
                set.insert(OutcomeSequence::concat(&[&[0], s.bits(), &[0]]));
            }
        }
        for left in (1..len - 1).step_by(2) {
            let right = len - 1 - left;
            for a in &by_len[left] {
                for b in &by_len[right] {
                    for x in [0u8, 1] {
                        set.insert(OutcomeSequence::concat(&[a.bits(), &[x], b.bits()]));
                    }
                }
            }
        }
        by_len[len] = set;
    }
    Ok(std::mem::take(&mut by_len[n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_parsing_round_trips() {
        let s: OutcomeSequence = "01011".parse().unwrap();
        assert_eq!(s.to_string(), "01011");
        assert_eq!(s.hamming_weight(), 3);
        assert_eq!(OutcomeSequence::from_index(0b01011, 5), s);
        assert!("012".parse::<OutcomeSequence>().is_err());
    }

    #[test]
    fn rules_follow_worked_examples() {
        let five = rule_based_sequences(5).unwrap();
        for s in ["00100", "01001", "01011"] {
            assert!(five.contains(&s.parse().unwrap()), "{s}");
        }
        assert_eq!(rule_based_sequences(7).unwrap().len(), 35);
    }

    #[test]
    fn even_sizes_are_rejected() {
        assert_eq!(rule_based_sequences(4), Err(Error::InvalidSize(4)));
        assert_eq!(ProtocolSpec::new(0, 0.1), Err(Error::InvalidSize(0)));
    }
}
