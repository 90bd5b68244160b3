use rand::Rng;

use crate::{Error, Result};

/// Measurement bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Z,
    /// Outcome 0 projects onto `(|0> + e^{-i xi}|1>)/sqrt2`.
    Xi(f64),
}

impl Basis {
    pub const X: Basis = Basis::Xi(0.0);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub basis: Basis,
    pub outcome: u8,
    pub probability: f64,
}

/// Supplies measurement outcomes given the Born probability of outcome 1.
pub trait OutcomeSource {
    fn next_outcome(&mut self, p_one: f64) -> Result<u8>;
}

impl<T: OutcomeSource + ?Sized> OutcomeSource for &mut T {
    fn next_outcome(&mut self, p_one: f64) -> Result<u8> {
        (**self).next_outcome(p_one)
    }
}

/// Born-rule sampling from an RNG. One uniform draw per measurement.
#[derive(Debug, Clone)]
pub struct Sampled<R>(pub R);

impl<R: Rng> OutcomeSource for Sampled<R> {
    fn next_outcome(&mut self, p_one: f64) -> Result<u8> {
        let u: f64 = self.0.random();
        if p_one <= crate::PROB_TOL {
            Ok(0)
        } else if p_one >= 1.0 - crate::PROB_TOL {
            Ok(1)
        } else {
            Ok(u8::from(u < p_one))
        }
    }
}

/// A fixed list of outcomes consumed in order.
#[derive(Debug, Clone, Default)]
pub struct Forced {
    bits: Vec<u8>,
    pos: usize,
}

impl Forced {
    pub fn new(bits: impl IntoIterator<Item = u8>) -> Self {
        Forced {
            bits: bits.into_iter().collect(),
            pos: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

impl OutcomeSource for Forced {
    fn next_outcome(&mut self, _p_one: f64) -> Result<u8> {
        let bit = *self.bits.get(self.pos).ok_or(Error::OutcomesExhausted)?;
        self.pos += 1;
        Ok(bit & 1)
    }
}
