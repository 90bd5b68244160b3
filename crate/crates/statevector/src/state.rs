use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::{
    Basis, Entangler, Error, Gate, MeasurementRecord, OutcomeSource, Result, C64,
    DEFAULT_MAX_QUBITS, PROB_TOL,
};

/// Initial single-qubit factor of a product register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitInit {
    Zero,
    One,
    Plus,
    Minus,
    Amplitudes(C64, C64),
}

impl QubitInit {
    pub fn amplitudes(&self) -> Result<[C64; 2]> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        match *self {
            QubitInit::Zero => Ok([l, o]),
            QubitInit::One => Ok([o, l]),
            QubitInit::Plus => Ok([h, h]),
            QubitInit::Minus => Ok([h, -h]),
            QubitInit::Amplitudes(a, b) => {
                let norm_sqr = a.norm_sqr() + b.norm_sqr();
                if (norm_sqr - 1.0).abs() > PROB_TOL {
                    return Err(Error::NotNormalized { norm_sqr });
                }
                Ok([a, b])
            }
        }
    }
}

/// Dense amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn from_product(factors: &[QubitInit]) -> Result<Self> {
        Self::from_product_capped(factors, DEFAULT_MAX_QUBITS)
    }

    pub fn from_product_capped(factors: &[QubitInit], max_qubits: usize) -> Result<Self> {
        let n = factors.len();
        if n == 0 {
            return Err(Error::BadLength(0));
        }
        if n > max_qubits {
            return Err(Error::TooManyQubits {
                requested: n,
                max: max_qubits,
            });
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for f in factors {
            let [a, b] = f.amplitudes()?;
            amps = amps.iter().flat_map(|&x| [x * a, x * b]).collect();
        }
        Ok(PureState { num_qubits: n, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        let state = PureState {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > PROB_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Builds a state from unnormalized amplitudes, rescaling them.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr <= PROB_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let s = norm_sqr.sqrt().recip();
        Self::from_amplitudes(amps.into_iter().map(|a| a * s).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn mask(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(1 << (self.num_qubits - 1 - qubit))
    }

    pub fn apply(&mut self, qubit: usize, gate: Gate) -> Result<()> {
        let m = self.mask(qubit)?;
        let u = gate.matrix();
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | m];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_controlled_phase(
        &mut self,
        control: usize,
        target: usize,
        phi: f64,
        entangler: Entangler,
    ) -> Result<()> {
        if control == target {
            return Err(Error::SameQubit(control));
        }
        let mc = self.mask(control)?;
        let mt = self.mask(target)?;
        let (want_c, want_t) = entangler.active_bits();
        let phase = C64::from_polar(1.0, phi);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & mc) != 0) == want_c && ((i & mt) != 0) == want_t {
                *a *= phase;
            }
        }
        Ok(())
    }

    /// `CZ`, the perfect entangler.
    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.apply_controlled_phase(a, b, std::f64::consts::PI, Entangler::Cs)
    }

    /// Probability of `outcome` when measuring `qubit` in `basis`.
    pub fn outcome_probability(&self, qubit: usize, basis: Basis, outcome: u8) -> Result<f64> {
        let m = self.mask(qubit)?;
        Ok(match basis {
            Basis::Z => self
                .amps
                .iter()
                .enumerate()
                .filter(|(i, _)| ((i & m) != 0) == (outcome == 1))
                .map(|(_, a)| a.norm_sqr())
                .sum(),
            Basis::Xi(xi) => {
                let w = xi_weight(xi, outcome);
                (0..self.amps.len())
                    .filter(|i| i & m == 0)
                    .map(|i| ((self.amps[i] + w * self.amps[i | m]) * FRAC_1_SQRT_2).norm_sqr())
                    .sum()
            }
        })
    }

    /// Projects `qubit` onto the given outcome and renormalizes. Returns the
    /// probability of that outcome.
    pub fn project(&mut self, qubit: usize, basis: Basis, outcome: u8) -> Result<f64> {
        let outcome = outcome & 1;
        let p = self.outcome_probability(qubit, basis, outcome)?;
        if p <= PROB_TOL {
            return Err(Error::ZeroProbability {
                qubit,
                outcome,
                probability: p,
            });
        }
        let m = self.mask(qubit)?;
        let s = p.sqrt().recip();
        match basis {
            Basis::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if ((i & m) != 0) == (outcome == 1) {
                        *a *= s;
                    } else {
                        *a = C64::new(0.0, 0.0);
                    }
                }
            }
            Basis::Xi(xi) => {
                let w = xi_weight(xi, outcome);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let c = (self.amps[i] + w * self.amps[i | m]) * 0.5 * s;
                        self.amps[i] = c;
                        self.amps[i | m] = c * w.conj();
                    }
                }
            }
        }
        Ok(p)
    }

    /// Measures `qubit`, drawing the outcome from `source`. The qubit is left in
    /// the eigenstate of the observed outcome.
    pub fn measure(
        &mut self,
        qubit: usize,
        basis: Basis,
        mut source: impl OutcomeSource,
    ) -> Result<MeasurementRecord> {
        let p_one = self.outcome_probability(qubit, basis, 1)?;
        let outcome = source.next_outcome(p_one)?;
        let probability = self.project(qubit, basis, outcome)?;
        Ok(MeasurementRecord {
            qubit,
            basis,
            outcome,
            probability,
        })
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest squared Schmidt coefficient across the cut `left | rest`.
    pub fn max_schmidt_weight(&self, left: &[usize]) -> Result<f64> {
        let (a, b) = self.split(left)?;
        let mut m = DMatrix::<C64>::zeros(1 << a.len(), 1 << b.len());
        for (i, amp) in self.amps.iter().enumerate() {
            m[(self.gather(i, &a), self.gather(i, &b))] = *amp;
        }
        let sv = m.svd(false, false).singular_values;
        Ok(sv.iter().fold(0.0f64, |x, &s| x.max(s * s)))
    }

    pub fn is_product_across_cut(&self, left: &[usize]) -> Result<bool> {
        Ok(self.max_schmidt_weight(left)? > 1.0 - 1e-10)
    }

    /// Returns the reduced pure state of `keep`, in the order given, provided
    /// the register factorizes across `keep | rest`.
    pub fn extract(&self, keep: &[usize]) -> Result<PureState> {
        if keep.len() == self.num_qubits {
            let mut sorted = keep.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != keep.len() || sorted.iter().enumerate().any(|(i, &q)| i != q) {
                return Err(Error::InvalidCut);
            }
            return self.permuted(keep);
        }
        let (a, b) = self.split(keep)?;
        if !self.is_product_across_cut(&a)? {
            return Err(Error::NotProduct);
        }
        let pivot = self
            .amps
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let rest_bits = self.gather(pivot, &b);
        let mut out = vec![C64::new(0.0, 0.0); 1 << a.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            if self.gather(i, &b) == rest_bits {
                out[self.gather(i, keep)] = *amp;
            }
        }
        PureState::normalized(out)
    }

    /// Replaces a qubit that is unentangled with the rest by a fresh factor.
    pub fn reset(&mut self, qubit: usize, init: QubitInit) -> Result<()> {
        let m = self.mask(qubit)?;
        let [a, b] = init.amplitudes()?;
        if self.num_qubits == 1 {
            *self = PureState::from_product(&[init])?;
            return Ok(());
        }
        let others: Vec<usize> = (0..self.num_qubits).filter(|&q| q != qubit).collect();
        let rest = self.extract(&others)?;
        let stride = m;
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (j, r) in rest.amps.iter().enumerate() {
            let high = (j / stride) * stride * 2;
            let low = j % stride;
            amps[high | low] = r * a;
            amps[high | m | low] = r * b;
        }
        self.amps = amps;
        Ok(())
    }

    /// `self ⊗ other`, with `other` occupying the higher qubit indices.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amps = self
            .amps
            .iter()
            .flat_map(|&x| other.amps.iter().map(move |&y| x * y))
            .collect();
        PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    /// Reorders qubits so that new qubit `k` is old qubit `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<PureState> {
        if order.len() != self.num_qubits {
            return Err(Error::InvalidCut);
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in order {
            self.mask(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::InvalidCut);
            }
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            amps[self.gather(i, order)] = *amp;
        }
        Ok(PureState {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    fn split(&self, left: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut a = left.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != left.len() || a.is_empty() || a.len() >= self.num_qubits {
            return Err(Error::InvalidCut);
        }
        for &q in &a {
            self.mask(q)?;
        }
        let b = (0..self.num_qubits).filter(|q| !a.contains(q)).collect();
        Ok((a, b))
    }

    /// Packs the bits of `index` at `qubits` into a smaller index, first listed
    /// qubit most significant.
    fn gather(&self, index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| {
            (acc << 1) | ((index >> (self.num_qubits - 1 - q)) & 1)
        })
    }
}

/// Relative weight of `|1>` against `|0>` in the bra of a xi-basis outcome.
fn xi_weight(xi: f64, outcome: u8) -> C64 {
    let sign = if outcome & 1 == 1 { -1.0 } else { 1.0 };
    C64::from_polar(sign, xi)
}

pub fn fidelity_up_to_global_phase(a: &PureState, b: &PureState) -> Result<f64> {
    a.fidelity(b)
}
