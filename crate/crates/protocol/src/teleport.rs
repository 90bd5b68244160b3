use std::f64::consts::PI;

use cluster_statevector::{Basis, Entangler, Gate, OutcomeSource, PureState, QubitInit, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, ProtocolSpec, Result, StochasticProtocol};

#[derive(Debug, Clone)]
pub struct Teleported {
    pub m: u8,
    pub output: PureState,
    pub probability: f64,
}

/// `psi ⊗ |+>`, entangled by `CS_{pi+theta}`, first qubit measured in the
/// xi basis.
pub fn one_bit_teleport(
    psi: QubitInit,
    xi: f64,
    theta: f64,
    source: impl OutcomeSource,
) -> Result<Teleported> {
    let mut s = PureState::from_product(&[psi, QubitInit::Plus])?;
    s.apply_controlled_phase(0, 1, PI + theta, Entangler::Cs)?;
    let rec = s.measure(0, Basis::Xi(xi), source)?;
    Ok(Teleported {
        m: rec.outcome,
        output: s.extract(&[1])?,
        probability: rec.probability,
    })
}

/// `X^m H Rz(xi) psi`.
pub fn ideal_teleport_output(psi: QubitInit, xi: f64, m: u8) -> Result<PureState> {
    let mut s = PureState::from_product(&[psi])?;
    s.apply(0, Gate::Rz(xi))?;
    s.apply(0, Gate::H)?;
    if m & 1 == 1 {
        s.apply(0, Gate::X)?;
    }
    Ok(s)
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl Estimate {
    pub fn from_samples(values: &[f64]) -> Estimate {
        let k = values.len();
        let mean = values.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        Estimate {
            mean,
            std_err: (var / k as f64).sqrt(),
            samples: k,
        }
    }
}

fn haar_qubit(rng: &mut impl Rng) -> QubitInit {
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    let (a, b) = (C64::new(g(), g()), C64::new(g(), g()));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    QubitInit::Amplitudes(a / norm, b / norm)
}

/// Infidelity of one-bit teleportation averaged over Haar-random inputs,
/// each input weighted exactly over both outcomes (`xi = 0`).
pub fn average_teleport_infidelity(theta: f64, samples: usize, seed: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let psi = haar_qubit(&mut rng);
        let mut s = PureState::from_product(&[psi, QubitInit::Plus])?;
        s.apply_controlled_phase(0, 1, PI + theta, Entangler::Cs)?;
        let mut loss = 0.0;
        for m in 0..2u8 {
            let p = s.outcome_probability(0, Basis::X, m)?;
            if p <= cluster_statevector::PROB_TOL {
                continue;
            }
            let mut branch = s.clone();
            branch.project(0, Basis::X, m)?;
            let out = branch.extract(&[1])?;
            loss += p * (1.0 - out.fidelity(&ideal_teleport_output(psi, 0.0, m)?)?);
        }
        values.push(loss);
    }
    Ok(Estimate::from_samples(&values))
}

#[derive(Debug, Clone)]
pub enum StochasticTeleport {
    /// `output` equals `Z^{1-m1} Rz(xi) psi`.
    Success {
        m1: u8,
        output: PureState,
        probability: f64,
    },
    Failure {
        end_pair: PureState,
        probability: f64,
    },
}

/// Runs the three-qubit protocol on `psi` and, on success, measures the first
/// qubit in the xi basis, leaving the rotated input on the last qubit.
pub fn stochastic_teleport(
    psi: QubitInit,
    xi: f64,
    theta: f64,
    mut source: impl OutcomeSource,
) -> Result<StochasticTeleport> {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(1, theta)?)?;
    let run = protocol.run(psi, &mut source)?;
    if !run.success {
        return Ok(StochasticTeleport::Failure {
            end_pair: run.end_pair,
            probability: run.path_probability,
        });
    }
    let mut pair = run.end_pair;
    let rec = pair.measure(0, Basis::Xi(xi), &mut source)?;
    Ok(StochasticTeleport::Success {
        m1: rec.outcome,
        output: pair.extract(&[1])?,
        probability: run.path_probability * rec.probability,
    })
}
