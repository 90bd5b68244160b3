use std::collections::BTreeSet;

use cluster_growth::{
    grow2d_trials, mc_length_gain, mc_link_change, mc_pair_prep_rounds, mc_three_node_rounds,
    CostModel, Grow2dConfig, NodeId,
};
use cluster_protocol::{
    average_teleport_infidelity, binomial, build_imperfect_chain, concatenated_ghz,
    enumerate_branches, enumerate_success_sequences, probe_inputs, retry_probabilities,
    retry_probabilities_by_branches, rule_based_sequences, stochastic_teleport,
    success_probability_closed, success_probability_oracle, OutcomeSequence, ProtocolSpec,
    StochasticProtocol, StochasticTeleport, PROBE_THETA,
};
use cluster_statevector::{Forced, Gate, PureState, QubitInit, Sampled, C64};

use crate::commands::{pipeline_run, RunConfig};
use crate::table::Table;
use crate::{Report, Result};

const STATE_TOL: f64 = 1e-10;
const PROB_TOL: f64 = 1e-10;
const PAIR_TRIALS: usize = 100_000;
const LINK_TRIALS: usize = 20_000;
const GRID_TRIALS: usize = 100;
const TELEPORT_SAMPLES: usize = 20_000;

struct Checks<'a> {
    cfg: &'a RunConfig,
    table: Table,
    passed: bool,
    notes: Vec<String>,
}

impl Checks<'_> {
    fn record(&mut self, name: &str, n: usize, theta: f64, value: f64, expected: f64, tol: f64) {
        let ok = (value - expected).abs() <= tol;
        self.push(name, n, theta, ok, value, expected, tol);
    }

    /// Passes when `value >= bound`.
    fn at_least(&mut self, name: &str, n: usize, theta: f64, value: f64, bound: f64) {
        self.push(name, n, theta, value >= bound, value, bound, 0.0);
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, name: &str, n: usize, theta: f64, ok: bool, value: f64, expected: f64, tol: f64) {
        if !ok {
            self.notes.push(format!("FAIL {name} (n={n}, theta={theta}): {value} vs {expected}"));
        }
        self.passed &= ok;
        self.table.push(
            self.cfg.header_at(n, theta),
            vec![name.into(), ok.into(), value.into(), expected.into(), tol.into()],
        );
    }
}

fn set(items: &[&str]) -> BTreeSet<OutcomeSequence> {
    items
        .iter()
        .map(|s| s.parse().expect("literal sequence"))
        .collect()
}

/// `(I ⊗ Z^q H) CZ (psi ⊗ |+>)`.
fn ideal_pair(psi: QubitInit, q: usize) -> Result<PureState> {
    let mut s = PureState::from_product(&[psi, QubitInit::Plus])?;
    s.apply_cz(0, 1)?;
    s.apply(1, Gate::H)?;
    if q % 2 == 1 {
        s.apply(1, Gate::Z)?;
    }
    Ok(s)
}

fn ghz(qubits: usize) -> Result<PureState> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << qubits];
    amps[0] = h;
    amps[(1 << qubits) - 1] = h;
    Ok(PureState::from_amplitudes(amps)?)
}

fn sequence_checks(c: &mut Checks) -> Result<()> {
    let published = [
        (1, set(&["1"])),
        (3, set(&["010", "101", "111"])),
        (
            5,
            set(&[
                "00100", "01001", "01011", "01110", "10010", "10101", "10111", "11010", "11101",
                "11111",
            ]),
        ),
    ];
    for (n, want) in &published {
        let got = enumerate_success_sequences(*n, PROBE_THETA)?;
        c.record("published_success_set", *n, PROBE_THETA, f64::from(u8::from(&got == want)), 1.0, 0.0);
    }
    for n in [1, 3, 5, 7] {
        let oracle = enumerate_success_sequences(n, PROBE_THETA)?;
        let rules = rule_based_sequences(n)?;
        c.record("rules_equal_oracle", n, PROBE_THETA, f64::from(u8::from(oracle == rules)), 1.0, 0.0);
        c.record("success_count", n, PROBE_THETA, oracle.len() as f64, binomial(n, n.div_ceil(2)), 0.0);
    }
    Ok(())
}

fn probability_checks(c: &mut Checks) -> Result<()> {
    for n in [1, 3, 5, 7] {
        let successes = enumerate_success_sequences(n, PROBE_THETA)?;
        for &theta in &c.cfg.thetas.clone() {
            let spec = ProtocolSpec::new(n, theta)?;
            let oracle = success_probability_oracle(&spec, QubitInit::Plus, &successes)?;
            c.record("closed_equals_oracle", n, theta, oracle, success_probability_closed(n, theta)?, PROB_TOL);
        }
    }
    Ok(())
}

fn state_checks(c: &mut Checks) -> Result<()> {
    for n in [1, 3, 5] {
        for &theta in &c.cfg.thetas.clone() {
            let p = StochasticProtocol::new(ProtocolSpec::new(n, theta)?)?;
            let mut worst: f64 = 1.0;
            for input in probe_inputs() {
                let chain = build_imperfect_chain(input, p.spec())?;
                for b in enumerate_branches(&chain, n)? {
                    if p.is_success(&b.outcomes) {
                        let f = b.end_pair.fidelity(&ideal_pair(input, b.outcomes.hamming_weight())?)?;
                        worst = worst.min(f);
                    }
                }
            }
            c.at_least("success_branch_fidelity", n, theta, worst, 1.0 - STATE_TOL);
        }
    }

    let theta = 0.61;
    let (alpha, beta) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let p = StochasticProtocol::new(ProtocolSpec::new(1, theta)?)?;
    let bad = p.run_forced(QubitInit::Amplitudes(alpha, beta), &"0".parse()?)?;
    let e = C64::from_polar(1.0, theta);
    let want = PureState::normalized(vec![
        (1.0 - e) * alpha / 4.0,
        alpha / 2.0,
        -e * beta / 2.0,
        (1.0 - e) * beta / 4.0,
    ])?;
    let got = bad.end_pair.amplitudes();
    let scale = want.amplitudes()[1] / got[1];
    let err = got
        .iter()
        .zip(want.amplitudes())
        .map(|(g, w)| (g * scale - w).norm())
        .fold(0.0, f64::max);
    c.record("failure_state_termwise", 1, theta, err, 0.0, 1e-12);
    Ok(())
}

fn teleport_checks(c: &mut Checks) -> Result<()> {
    for theta in [0.3, 1.0] {
        let est = average_teleport_infidelity(theta, TELEPORT_SAMPLES, c.cfg.seed)?;
        let want = 0.5 * (theta / 2.0).sin().powi(2);
        c.record("teleport_infidelity", 1, theta, est.mean, want, 3.0 * est.std_err);
    }
    let theta = 0.8;
    let psi = QubitInit::Amplitudes(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let mut worst: f64 = 1.0;
    for m1 in 0..2u8 {
        let StochasticTeleport::Success { output, .. } =
            stochastic_teleport(psi, 0.9, theta, Forced::new([1, m1]))?
        else {
            worst = 0.0;
            continue;
        };
        let mut want = PureState::from_product(&[psi])?;
        want.apply(0, Gate::Rz(0.9))?;
        if m1 == 0 {
            want.apply(0, Gate::Z)?;
        }
        worst = worst.min(output.fidelity(&want)?);
    }
    c.at_least("teleport_success_branch", 1, theta, worst, 1.0 - STATE_TOL);
    Ok(())
}

fn retry_checks(c: &mut Checks) -> Result<()> {
    for theta in [0.3, 1.0, 2.0] {
        let t = retry_probabilities(1, theta, 2000)?;
        c.record("retry_limit_n1", 1, theta, t.total(), 0.5, 1e-6);
    }
    for theta in [0.3, 1.0] {
        let fast = retry_probabilities(3, theta, 6)?;
        let slow = retry_probabilities_by_branches(3, theta, 6, 1e-15)?;
        let diff = fast
            .per_failure
            .iter()
            .zip(&slow.per_failure)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.record("retry_matches_branches", 3, theta, diff, 0.0, 1e-12);
    }
    Ok(())
}

fn ghz_checks(c: &mut Checks) -> Result<()> {
    let theta = 0.7;
    let run = concatenated_ghz(2, theta, Sampled(cluster_growth::trial_rng(c.cfg.seed, 0)))?;
    c.at_least("ghz_two_protocols", 3, theta, run.state.fidelity(&ghz(3)?)?, 1.0 - STATE_TOL);
    Ok(())
}

fn pipeline_checks(c: &mut Checks) -> Result<()> {
    let nodes: Vec<NodeId> = (0..4).map(NodeId).collect();
    for &theta in &c.cfg.thetas.clone() {
        let r = pipeline_run(c.cfg, theta, 0)?;
        c.at_least("pipeline_three_node", 3, theta, r.fidelity, 1.0 - 1e-9);
        c.at_least("pipeline_linear_cluster", 3, theta, r.linear_fidelity, 1.0 - 1e-9);
    }
    // The abstract bookkeeping must describe the same state as the register.
    let mut config = cluster_growth::PipelineConfig::new(0.3);
    if c.cfg.corrupt_gate {
        config.entangler = cluster_statevector::Entangler::Cs;
    }
    let r = cluster_growth::run_thirteen_qubit_pipeline(
        &config,
        Sampled(cluster_growth::trial_rng(c.cfg.seed, 0)),
    );
    let f = match r {
        Ok(r) => r.three_node()?.fidelity(&r.graph.canonical_state(&nodes)?)?,
        Err(_) => 0.0,
    };
    c.at_least("pipeline_graph_matches_register", 3, 0.3, f, 1.0 - 1e-9);
    Ok(())
}

fn growth_checks(c: &mut Checks) -> Result<()> {
    let theta = 0.3;
    let model = CostModel::from_theta(3, theta, 3.0)?;
    let p = model.p;
    let seed = c.cfg.seed;
    let sa = mc_pair_prep_rounds(p, PAIR_TRIALS, seed)?;
    c.record("s_a", 3, theta, sa.mean, model.s_a(), 0.01 * model.s_a());
    let sb = mc_three_node_rounds(p, PAIR_TRIALS, seed)?;
    c.record("s_b", 3, theta, sb.mean, model.s_b(), 0.01 * model.s_b());
    let dl = mc_length_gain(p, PAIR_TRIALS, seed)?;
    c.record("length_gain", 3, theta, dl.mean, model.length_gain(), 0.02 * model.length_gain());

    for p in [0.2, 0.5, 0.8] {
        let boundary = 1.0 / p - 2.0;
        for links in 1..=6usize {
            let l = links as f64;
            if (l - boundary).abs() <= 0.5 {
                continue;
            }
            let est = mc_link_change(links, p, LINK_TRIALS, seed)?;
            let sign = if l > boundary { est.mean } else { -est.mean };
            c.push("link_change_sign", links, p, sign > 0.0, est.mean, boundary, 0.0);
        }
    }

    let config = Grow2dConfig::from_theta(3, 3, theta)?;
    let g = grow2d_trials(&config, GRID_TRIALS, seed)?;
    c.record("grid_achieved", 3, theta, g.grids_achieved as f64, GRID_TRIALS as f64, 0.0);
    Ok(())
}

/// Runs every deterministic check and the thirteen-qubit pipeline over the
/// configured theta values.
pub fn verify(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut c = Checks {
        cfg,
        table: Table::new(&["check", "passed", "value", "expected", "tolerance"]),
        passed: true,
        notes: Vec::new(),
    };
    sequence_checks(&mut c)?;
    probability_checks(&mut c)?;
    state_checks(&mut c)?;
    teleport_checks(&mut c)?;
    retry_checks(&mut c)?;
    ghz_checks(&mut c)?;
    pipeline_checks(&mut c)?;
    growth_checks(&mut c)?;
    let total = c.table.len();
    let failed = c.notes.len();
    c.notes.push(format!("{} of {total} checks passed", total - failed));
    Ok(Report {
        table: c.table,
        passed: c.passed,
        notes: c.notes,
    })
}
