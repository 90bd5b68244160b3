//! Two 2-chains prepared side by side and fused into a 3-node on a single
//! thirteen-qubit register driven only by global entangling operations.

use cluster_protocol::{retry_probabilities, OutcomeSequence, ProtocolSpec, StochasticProtocol};
use cluster_statevector::{Basis, Entangler, Gate, OutcomeSource, PureState, QubitInit};

use crate::graph::{ClusterGraph, FuseOutcome, LeafChoice, NodeId};
use crate::layout::selective_layout;
use crate::stats::GrowthStats;
use crate::{Error, Result};

const QUBITS: usize = 13;
const N: usize = 3;
/// First stage: end qubits and middles of the two chains.
const CHAINS: [[usize; 5]; 2] = [[0, 1, 2, 3, 4], [8, 9, 10, 11, 12]];
/// Second stage chain from the first tip to the second tail.
const FUSION: [usize; 5] = [4, 5, 6, 7, 8];
/// Qubits that carry the 3-node, in output order.
pub const NODE_QUBITS: [usize; 4] = [0, 4, 8, 12];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub theta: f64,
    /// Protocol applications allowed before giving up.
    pub retry_cap: usize,
    /// A failed end pair is retried while the next attempt succeeds with at
    /// least this fraction of a fresh pair's probability, and is otherwise
    /// measured out and rebuilt.
    pub rebuild_below: f64,
    /// Gate the hardware actually applies; the success table always assumes
    /// `CSX`.
    pub entangler: Entangler,
}

impl PipelineConfig {
    pub fn new(theta: f64) -> Self {
        PipelineConfig {
            theta,
            retry_cap: 10_000,
            rebuild_below: 0.5,
            entangler: Entangler::Csx,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// One of the two outer 5-chains, by index.
    Pair(usize),
    Fusion,
}

/// One protocol application and its exact success probability given the
/// register before measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attempt {
    pub stage: Stage,
    pub success_probability: f64,
    pub succeeded: bool,
    /// Whether the end pair was freshly prepared for this attempt.
    pub fresh: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    /// Qubits 1, 5, 9, 13 after byproduct correction, still carrying the
    /// trapped Hadamard on qubit 9.
    pub state: PureState,
    /// Whole register at the end of the run.
    pub register: PureState,
    /// The 3-node as an abstract graph on nodes 0..4 in `NODE_QUBITS` order.
    pub graph: ClusterGraph,
    pub stats: GrowthStats,
    pub attempts: Vec<Attempt>,
}

impl PipelineResult {
    /// Applies the Hadamard to qubit 9, giving the 3-node graph state.
    pub fn three_node(&self) -> Result<PureState> {
        let mut s = self.state.clone();
        s.apply(2, Gate::H)?;
        Ok(s)
    }

    /// Removes qubit 9 with a `sigma_z` measurement and corrects qubit 5,
    /// returning the state of qubits 1, 5, 13 and the outcome.
    pub fn linear_cluster(&self, source: impl OutcomeSource) -> Result<(PureState, u8)> {
        let mut s = self.three_node()?;
        let m = s.measure(2, Basis::Z, source)?.outcome;
        if m == 1 {
            s.apply(1, Gate::Z)?;
        }
        Ok((s.extract(&[0, 1, 3])?, m))
    }
}

/// Longest failure history after which a retry on the same end pair still
/// succeeds with at least `fraction` of the fresh probability.
fn retry_budget(theta: f64, fraction: f64) -> Result<usize> {
    const HORIZON: usize = 4096;
    let table = retry_probabilities(N, theta, HORIZON)?;
    let fresh = table.per_failure[0];
    let mut alive = 1.0;
    for (k, &p) in table.per_failure.iter().enumerate() {
        if alive <= 0.0 || p / alive < fraction * fresh {
            return Ok(k);
        }
        alive -= p;
    }
    Ok(HORIZON)
}

struct Register<'a> {
    state: PureState,
    protocol: &'a StochasticProtocol,
    config: &'a PipelineConfig,
    budget: usize,
    stats: GrowthStats,
    attempts: Vec<Attempt>,
}

impl Register<'_> {
    /// One global entangling operation on every neighbouring pair.
    fn entangle(&mut self) -> Result<()> {
        let phase = self.protocol.spec().phase();
        for q in 0..QUBITS - 1 {
            self.state
                .apply_controlled_phase(q, q + 1, phase, self.config.entangler)?;
        }
        Ok(())
    }

    fn set(&mut self, q: usize, init: QubitInit) -> Result<()> {
        self.state.reset(q, init)?;
        Ok(())
    }

    /// Exact probability that measuring `middles` gives a success sequence.
    fn success_probability(&self, middles: &[usize]) -> Result<f64> {
        let mut total = 0.0;
        for seq in self.protocol.successes() {
            let mut s = self.state.clone();
            let mut p = 1.0;
            for (&q, &b) in middles.iter().zip(seq.bits()) {
                match s.project(q, Basis::X, b) {
                    Ok(pb) => p *= pb,
                    Err(cluster_statevector::Error::ZeroProbability { .. }) => {
                        p = 0.0;
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            total += p;
        }
        Ok(total)
    }

    fn charge(&mut self, applications: usize) -> Result<()> {
        self.stats.protocol_applications += applications;
        self.stats.time_steps += 5;
        if self.stats.protocol_applications > self.config.retry_cap {
            return Err(Error::RetryCapExceeded(self.config.retry_cap));
        }
        Ok(())
    }

    /// Measures the middles of each active chain; returns the outcome weight
    /// and whether it heralded success, per chain.
    fn measure_chains(
        &mut self,
        chains: &[(Stage, [usize; 5], bool)],
        mut source: impl OutcomeSource,
    ) -> Result<Vec<(usize, bool)>> {
        let mut out = Vec::with_capacity(chains.len());
        for &(stage, chain, fresh) in chains {
            let p = self.success_probability(&chain[1..4])?;
            let mut bits = Vec::with_capacity(N);
            for &q in &chain[1..4] {
                bits.push(self.state.measure(q, Basis::X, &mut source)?.outcome);
            }
            let seq = OutcomeSequence::new(bits)?;
            let ok = self.protocol.is_success(&seq);
            self.attempts.push(Attempt {
                stage,
                success_probability: p,
                succeeded: ok,
                fresh,
            });
            out.push((seq.hamming_weight(), ok));
        }
        Ok(out)
    }

    /// Z-measures the ends of a failed chain and returns them to `|+>`.
    fn rebuild(&mut self, ends: [usize; 2], mut source: impl OutcomeSource) -> Result<()> {
        for q in ends {
            self.state.measure(q, Basis::Z, &mut source)?;
            self.set(q, QubitInit::Plus)?;
        }
        Ok(())
    }

    /// Runs both outer chains until each holds a Bell pair; returns the
    /// accumulated outcome weight per chain. Failed sequences count too,
    /// since an odd failure flips the relative sign of `|00>` and `|11>`.
    fn prepare_pairs(&mut self, mut source: impl OutcomeSource) -> Result<[usize; 2]> {
        let layout = selective_layout(QUBITS, &[CHAINS[0][0], CHAINS[1][0]], N)?;
        self.state = PureState::from_product(&layout)?;
        let mut parity = [0usize; 2];
        let mut done = [false; 2];
        let mut failures = [0usize; 2];
        while !(done[0] && done[1]) {
            let mut active = Vec::new();
            for k in 0..2 {
                let chain = CHAINS[k];
                if done[k] {
                    // Isolate the finished pair from the next global operation.
                    self.set(chain[1], QubitInit::One)?;
                    self.set(chain[2], QubitInit::Zero)?;
                    self.set(chain[3], QubitInit::Zero)?;
                } else {
                    for &q in &chain[1..4] {
                        self.set(q, QubitInit::Plus)?;
                    }
                    active.push((Stage::Pair(k), chain, failures[k] == 0));
                }
            }
            self.entangle()?;
            self.charge(active.len())?;
            let results = self.measure_chains(&active, &mut source)?;
            for ((stage, chain, _), (q, ok)) in active.into_iter().zip(results) {
                let Stage::Pair(k) = stage else { unreachable!() };
                parity[k] += q;
                match ok {
                    true => done[k] = true,
                    false => {
                        failures[k] += 1;
                        if failures[k] >= self.budget {
                            self.rebuild([chain[0], chain[4]], &mut source)?;
                            failures[k] = 0;
                            parity[k] = 0;
                        }
                    }
                }
            }
            self.stats.pair_prep_rounds += 1;
        }
        Ok(parity)
    }
}

/// Runs the full thirteen-qubit sequence: two simultaneous 5-chain protocols,
/// Hadamards on the tips, a reconnecting layout and a fusion protocol between
/// qubits 5 and 9, retrying failed protocols on the same end pairs.
pub fn run_thirteen_qubit_pipeline(
    config: &PipelineConfig,
    mut source: impl OutcomeSource,
) -> Result<PipelineResult> {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(N, config.theta)?)?;
    let mut reg = Register {
        state: PureState::from_product(&[QubitInit::Zero; QUBITS])?,
        protocol: &protocol,
        config,
        budget: retry_budget(config.theta, config.rebuild_below)?.max(1),
        stats: GrowthStats::default(),
        attempts: Vec::new(),
    };
    'build: loop {
        let parity = reg.prepare_pairs(&mut source)?;
        for (k, chain) in CHAINS.iter().enumerate() {
            if parity[k] % 2 == 1 {
                reg.state.apply(chain[0], Gate::Z)?;
            }
            reg.state.apply(chain[4], Gate::H)?;
        }
        // Reconnect tip 5 to tail 9 through qubits 6-8.
        reg.set(1, QubitInit::One)?;
        reg.set(2, QubitInit::Zero)?;
        reg.set(3, QubitInit::Zero)?;
        reg.set(9, QubitInit::One)?;
        reg.set(10, QubitInit::Zero)?;
        reg.set(11, QubitInit::Zero)?;
        let mut fusion_parity = 0;
        let mut failures = 0;
        loop {
            for &q in &FUSION[1..4] {
                reg.set(q, QubitInit::Plus)?;
            }
            reg.entangle()?;
            reg.charge(1)?;
            reg.stats.node_fusion_attempts += 1;
            let r = reg.measure_chains(&[(Stage::Fusion, FUSION, failures == 0)], &mut source)?;
            let (q, ok) = r[0];
            fusion_parity += q;
            match ok {
                true => break,
                false => {
                    failures += 1;
                    if failures >= reg.budget {
                        for q in NODE_QUBITS {
                            reg.state.measure(q, Basis::Z, &mut source)?;
                        }
                        continue 'build;
                    }
                }
            }
        }
        if fusion_parity % 2 == 1 {
            reg.state.apply(FUSION[4], Gate::Z)?;
        }
        let state = reg.state.extract(&NODE_QUBITS)?;
        let graph = three_node_graph(fusion_parity)?;
        let mut stats = reg.stats.with_graph(&graph);
        stats.physical_qubits_used = QUBITS;
        return Ok(PipelineResult {
            state,
            register: reg.state,
            graph,
            stats,
            attempts: reg.attempts,
        });
    }
}

/// The graph bookkeeping for the same run: fuse two 2-chains between nodes 1
/// and 2 and resolve the Hadamard on the tail.
fn three_node_graph(weight: usize) -> Result<ClusterGraph> {
    let mut g = ClusterGraph::new();
    g.add_path(2);
    g.add_path(2);
    g.fuse(
        NodeId(1),
        NodeId(2),
        FuseOutcome::Success {
            weight,
            leaf: LeafChoice::Deferred,
        },
    )?;
    g.resolve_hadamard(NodeId(2), LeafChoice::Tail)?;
    // The physical Z^q was applied above.
    if g.byproduct(NodeId(1)) {
        g.flip_byproduct(NodeId(1))?;
    }
    Ok(g)
}
