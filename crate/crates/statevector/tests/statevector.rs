use std::f64::consts::{FRAC_1_SQRT_2, PI};

use cluster_statevector::{
    phase_from_interaction, Basis, Entangler, Error, Forced, Gate, PureState, QubitInit, Sampled,
    C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(factors: &[QubitInit]) -> PureState {
    PureState::from_product(factors).unwrap()
}

fn assert_same(a: &PureState, b: &PureState) {
    let f = a.fidelity(b).unwrap();
    assert!((f - 1.0).abs() < 1e-10, "fidelity {f}");
}

fn arb_state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
        "zero vector",
        |v| PureState::normalized(v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).ok(),
    )
}

#[test]
fn single_qubit_gates() {
    let mut s = state(&[QubitInit::Zero]);
    s.apply(0, Gate::H).unwrap();
    assert_same(&s, &state(&[QubitInit::Plus]));

    let mut s = state(&[QubitInit::Plus]);
    s.apply(0, Gate::Z).unwrap();
    assert_same(&s, &state(&[QubitInit::Minus]));

    let xi = 1.1;
    let mut s = state(&[QubitInit::Plus]);
    s.apply(0, Gate::Rz(xi)).unwrap();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let want = PureState::from_amplitudes(vec![h, C64::from_polar(FRAC_1_SQRT_2, xi)]).unwrap();
    assert_eq!(s.amplitudes()[0], want.amplitudes()[0]);
    assert!((s.amplitudes()[1] - want.amplitudes()[1]).norm() < 1e-15);

    assert!(matches!(
        s.apply(1, Gate::X),
        Err(Error::QubitOutOfRange { qubit: 1, .. })
    ));
}

#[test]
fn controlled_phase_actions() {
    let mut s = state(&[QubitInit::One, QubitInit::One]);
    s.apply_controlled_phase(0, 1, PI, Entangler::Cs).unwrap();
    assert!((s.amplitudes()[3] + 1.0).norm() < 1e-15);

    let mut s = state(&[QubitInit::Zero, QubitInit::One]);
    s.apply_controlled_phase(0, 1, 0.9, Entangler::Csx).unwrap();
    assert_eq!(s, state(&[QubitInit::Zero, QubitInit::One]));

    let theta = 0.3;
    let mut s = state(&[QubitInit::Plus, QubitInit::Zero]);
    s.apply_controlled_phase(0, 1, PI + theta, Entangler::Csx)
        .unwrap();
    let a = s.amplitudes();
    assert!((a[0] - FRAC_1_SQRT_2).norm() < 1e-15);
    assert!((a[2] - C64::from_polar(FRAC_1_SQRT_2, PI + theta)).norm() < 1e-15);
    assert_eq!(a[1], C64::new(0.0, 0.0));

    assert_eq!(
        s.apply_controlled_phase(1, 1, 0.1, Entangler::Cs),
        Err(Error::SameQubit(1))
    );
}

#[test]
fn interaction_phase() {
    assert_eq!(phase_from_interaction(1.0, PI, 1.0).unwrap(), PI);
    assert_eq!(phase_from_interaction(2.0, 1.0, 1.0).unwrap(), 2.0);
    assert_eq!(phase_from_interaction(1.0, PI + 0.3, 1.0).unwrap(), PI + 0.3);
    assert_eq!(
        phase_from_interaction(1.0, 1.0, 0.0),
        Err(Error::NonPositiveHbar(0.0))
    );
}

#[test]
fn z_measurement_probabilities() {
    let s = state(&[QubitInit::Plus]);
    assert!((s.outcome_probability(0, Basis::Z, 0).unwrap() - 0.5).abs() < 1e-15);
    assert!((s.outcome_probability(0, Basis::Z, 1).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn forced_zero_probability_outcome_is_rejected() {
    let mut s = state(&[QubitInit::Zero]);
    let err = s.measure(0, Basis::Z, Forced::new([1])).unwrap_err();
    assert!(matches!(err, Error::ZeroProbability { outcome: 1, .. }));
    let mut s = state(&[QubitInit::Plus]);
    assert!(s.measure(0, Basis::X, Forced::new([1])).is_err());
    assert_eq!(
        s.measure(0, Basis::X, Forced::new([])).unwrap_err(),
        Error::OutcomesExhausted
    );
}

#[test]
fn three_chain_x_measurement_branches() {
    // Middle qubit of a CSX chain carrying psi on qubit 0.
    let theta = 0.45;
    let (alpha, beta) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let build = || {
        let mut s = state(&[
            QubitInit::Amplitudes(alpha, beta),
            QubitInit::Plus,
            QubitInit::Plus,
        ]);
        s.apply_controlled_phase(0, 1, PI + theta, Entangler::Csx)
            .unwrap();
        s.apply_controlled_phase(1, 2, PI + theta, Entangler::Csx)
            .unwrap();
        s
    };

    let mut s = build();
    s.project(1, Basis::X, 1).unwrap();
    let ends = s.extract(&[0, 2]).unwrap();
    let want = PureState::from_amplitudes(vec![alpha, C64::new(0.0, 0.0), C64::new(0.0, 0.0), -beta])
        .unwrap();
    assert_same(&ends, &want);

    let mut s = build();
    s.project(1, Basis::X, 0).unwrap();
    let ends = s.extract(&[0, 2]).unwrap();
    let e = C64::from_polar(1.0, theta);
    let want = PureState::normalized(vec![
        alpha * (1.0 - e) / 4.0,
        alpha / 2.0,
        -e * beta / 2.0,
        beta * (1.0 - e) / 4.0,
    ])
    .unwrap();
    assert_same(&ends, &want);
}

#[test]
fn fidelity_examples() {
    let psi = state(&[QubitInit::Amplitudes(C64::new(0.6, 0.0), C64::new(0.0, 0.8))]);
    let phase = C64::from_polar(1.0, 0.37);
    let rotated =
        PureState::from_amplitudes(psi.amplitudes().iter().map(|a| a * phase).collect()).unwrap();
    assert!((psi.fidelity(&rotated).unwrap() - 1.0).abs() < 1e-15);
    let zero = state(&[QubitInit::Zero]);
    assert_eq!(zero.fidelity(&state(&[QubitInit::One])).unwrap(), 0.0);
    assert!((state(&[QubitInit::Plus]).fidelity(&zero).unwrap() - 0.5).abs() < 1e-15);
    assert!(matches!(
        zero.fidelity(&state(&[QubitInit::Zero, QubitInit::Zero])),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn product_across_cut_examples() {
    let s = state(&[QubitInit::Zero, QubitInit::Plus]);
    assert!(s.is_product_across_cut(&[0]).unwrap());

    let mut bell = state(&[QubitInit::Plus, QubitInit::Zero]);
    bell.apply(1, Gate::H).unwrap();
    bell.apply_cz(0, 1).unwrap();
    bell.apply(1, Gate::H).unwrap();
    assert!(!bell.is_product_across_cut(&[0]).unwrap());

    let chi = QubitInit::Amplitudes(C64::new(0.28, 0.0), C64::new(0.0, 0.96));
    let mut s = state(&[chi, QubitInit::One]);
    s.apply_controlled_phase(0, 1, PI + 0.3, Entangler::Csx)
        .unwrap();
    assert!(s.is_product_across_cut(&[0]).unwrap());

    assert_eq!(s.is_product_across_cut(&[]), Err(Error::InvalidCut));
    assert_eq!(s.is_product_across_cut(&[0, 1]), Err(Error::InvalidCut));
}

#[test]
fn sampled_outcomes_are_reproducible() {
    let run = |seed: u64| {
        let mut src = Sampled(ChaCha8Rng::seed_from_u64(seed));
        (0..64)
            .map(|_| {
                let mut s = state(&[QubitInit::Plus, QubitInit::Plus]);
                s.apply_controlled_phase(0, 1, 2.2, Entangler::Csx).unwrap();
                let a = s.measure(0, Basis::X, &mut src).unwrap().outcome;
                let b = s.measure(1, Basis::Z, &mut src).unwrap().outcome;
                (a, b)
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(7), run(7));
    assert_ne!(run(7), run(8));
}

proptest! {
    #[test]
    fn gates_preserve_norm(
        s in arb_state(4),
        ops in prop::collection::vec((0usize..4, 0usize..4, 0u8..6, -10.0f64..10.0), 1..20),
    ) {
        let mut s = s;
        for (a, b, kind, angle) in ops {
            match kind {
                0 => s.apply(a, Gate::H).unwrap(),
                1 => s.apply(a, Gate::X).unwrap(),
                2 => s.apply(a, Gate::Z).unwrap(),
                3 => s.apply(a, Gate::Rz(angle)).unwrap(),
                4 if a != b => s.apply_controlled_phase(a, b, angle, Entangler::Cs).unwrap(),
                _ if a != b => s.apply_controlled_phase(a, b, angle, Entangler::Csx).unwrap(),
                _ => {}
            }
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csx_is_cs_conjugated_by_target_x(s in arb_state(2), phi in -10.0f64..10.0) {
        let mut direct = s.clone();
        direct.apply_controlled_phase(0, 1, phi, Entangler::Csx).unwrap();
        let mut via = s;
        via.apply(1, Gate::X).unwrap();
        via.apply_controlled_phase(0, 1, phi, Entangler::Cs).unwrap();
        via.apply(1, Gate::X).unwrap();
        for (a, b) in direct.amplitudes().iter().zip(via.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn outcome_probabilities_sum_to_one(s in arb_state(3), q in 0usize..3, xi in -7.0f64..7.0, z in any::<bool>()) {
        let basis = if z { Basis::Z } else { Basis::Xi(xi) };
        let p0 = s.outcome_probability(q, basis, 0).unwrap();
        let p1 = s.outcome_probability(q, basis, 1).unwrap();
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_renormalizes(s in arb_state(3), q in 0usize..3, xi in -7.0f64..7.0, m in 0u8..2) {
        let mut s = s;
        if s.outcome_probability(q, Basis::Xi(xi), m).unwrap() > 1e-9 {
            s.project(q, Basis::Xi(xi), m).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((s.outcome_probability(q, Basis::Xi(xi), m).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn product_states_factor(a in arb_state(1), b in arb_state(2)) {
        let s = a.tensor(&b);
        prop_assert!(s.is_product_across_cut(&[0]).unwrap());
        let back = s.extract(&[1, 2]).unwrap();
        prop_assert!((back.fidelity(&b).unwrap() - 1.0).abs() < 1e-10);
    }
}
