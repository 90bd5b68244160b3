//! Bernoulli-outcome growth of a linear cluster from 3-nodes.

use cluster_protocol::rule_based_sequences;
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::cost::CostModel;
use crate::graph::{ClusterGraph, FuseOutcome, LeafChoice, NodeId};
use crate::stats::GrowthStats;
use crate::{Error, Result};

/// Protocol cost of one 3-node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ThreeNodeCost {
    pub pair_rounds: usize,
    pub fusion_attempts: usize,
    pub applications: usize,
}

/// Samples the rounds needed for one 3-node: both 2-chains are retried
/// until each succeeds, then fused; a failed fusion starts over.
pub(crate) fn sample_three_node(p: f64, rng: &mut impl Rng) -> Result<ThreeNodeCost> {
    let geo = Geometric::new(p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut cost = ThreeNodeCost::default();
    loop {
        let u = geo.sample(rng) as usize;
        let v = geo.sample(rng) as usize;
        cost.pair_rounds += u.max(v) + 1;
        cost.applications += u + v + 2;
        cost.fusion_attempts += 1;
        cost.applications += 1;
        if bernoulli(p, rng) {
            return Ok(cost);
        }
    }
}

pub(crate) fn bernoulli(p: f64, rng: &mut impl Rng) -> bool {
    p >= 1.0 || rng.random::<f64>() < p
}

/// Growth state of one linear cluster living inside a shared graph.
///
/// The spine lists the longest linear segment from its fixed start to the
/// current tip. Every spine node except the ends may carry leaves.
#[derive(Debug, Clone)]
pub(crate) struct Spine {
    pub nodes: Vec<NodeId>,
    p: f64,
    n: usize,
    weights: Vec<usize>,
    leaf: LeafChoice,
    pub stats: GrowthStats,
    pub seeds: usize,
    pub seed_rounds: usize,
    /// The spine may not shrink to this length or below.
    pub floor: usize,
}

fn random_bit(rng: &mut impl Rng) -> u8 {
    u8::from(rng.random::<bool>())
}

impl Spine {
    pub fn new(model: &CostModel, leaf: LeafChoice) -> Result<Self> {
        if leaf == LeafChoice::Deferred {
            return Err(Error::InvalidArgument("growth needs a leaf choice".into()));
        }
        let weights = rule_based_sequences(model.n)?
            .iter()
            .map(|s| s.hamming_weight())
            .collect();
        Ok(Spine {
            nodes: Vec::new(),
            p: model.p,
            n: model.n,
            weights,
            leaf,
            stats: GrowthStats::default(),
            seeds: 0,
            seed_rounds: 0,
            floor: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Physical qubits along the row: each 3-node occupies `3(n+1)+1` and
    /// each join adds a fresh 3-node plus `n` connecting qubits.
    pub fn physical_extent(&self) -> usize {
        let block = self.n + 1;
        self.seeds * (3 * block + 1) + self.stats.join_attempts * 4 * block
    }

    /// A random Hamming weight from the success table.
    pub fn success_weight(&self, rng: &mut impl Rng) -> usize {
        self.weights[rng.random_range(0..self.weights.len())]
    }

    /// Prepares a 3-node `a - b - c` with leaf `d` on `b`.
    fn three_node(&mut self, g: &mut ClusterGraph, rng: &mut impl Rng) -> Result<[NodeId; 4]> {
        let cost = sample_three_node(self.p, rng)?;
        self.stats.pair_prep_rounds += cost.pair_rounds;
        self.stats.node_fusion_attempts += cost.fusion_attempts;
        self.stats.protocol_applications += cost.applications;
        self.stats.time_steps += 5 * (cost.pair_rounds + cost.fusion_attempts);
        let ids = g.add_path(3);
        let d = g.add_node();
        g.add_edge(ids[1], d)?;
        Ok([ids[0], ids[1], ids[2], d])
    }

    fn seed(&mut self, g: &mut ClusterGraph, rng: &mut impl Rng) -> Result<()> {
        let before = self.stats.pair_prep_rounds;
        let [a, b, c, _] = self.three_node(g, rng)?;
        self.seed_rounds += self.stats.pair_prep_rounds - before;
        self.seeds += 1;
        self.nodes = vec![a, b, c];
        Ok(())
    }

    pub fn attempt_join(&mut self, g: &mut ClusterGraph, rng: &mut impl Rng) -> Result<bool> {
        let Some(&tip) = self.nodes.last() else {
            self.seed(g, rng)?;
            return Ok(true);
        };
        let [a, b, c, d] = self.three_node(g, rng)?;
        self.stats.join_attempts += 1;
        self.stats.protocol_applications += 1;
        self.stats.time_steps += 5;
        if bernoulli(self.p, rng) {
            let weight = self.success_weight(rng);
            g.fuse(tip, a, FuseOutcome::Success { weight, leaf: self.leaf })?;
            if self.nodes.len() == 1 {
                // A lone tip has no other neighbour, so the new leaf extends
                // the segment at the start.
                self.nodes = match self.leaf {
                    LeafChoice::Tip => vec![tip, a, b, c],
                    _ => vec![a, tip, b, c],
                };
                return Ok(true);
            }
            if self.leaf == LeafChoice::Tip {
                *self.nodes.last_mut().expect("tip exists") = a;
            }
            self.nodes.extend([b, c]);
            return Ok(true);
        }
        let outcome = FuseOutcome::Failure {
            tip: random_bit(rng),
            tail: random_bit(rng),
        };
        g.fuse(tip, a, outcome)?;
        for v in [b, c, d] {
            g.z_measure(v, random_bit(rng))?;
        }
        self.nodes.pop();
        if let Some(&last) = self.nodes.last() {
            let before = self.nodes.len().checked_sub(2).map(|i| self.nodes[i]);
            if let Some(l) = g.leaves_of(last).into_iter().find(|&l| Some(l) != before) {
                self.nodes.push(l);
            }
        }
        if self.floor > 0 && self.nodes.len() <= self.floor {
            return Err(Error::InvalidArgument(format!(
                "growth failures reached protected spine position {}",
                self.floor
            )));
        }
        Ok(false)
    }

    pub fn grow_to(&mut self, g: &mut ClusterGraph, target: usize, rng: &mut impl Rng) -> Result<()> {
        while self.nodes.len() < target {
            self.attempt_join(g, rng)?;
        }
        Ok(())
    }
}

/// A linear cluster grown at one end by fusing 3-nodes onto its tip.
#[derive(Debug, Clone)]
pub struct LinearGrower {
    graph: ClusterGraph,
    spine: Spine,
}

impl LinearGrower {
    pub fn new(model: &CostModel, leaf: LeafChoice) -> Result<Self> {
        Ok(LinearGrower {
            graph: ClusterGraph::new(),
            spine: Spine::new(model, leaf)?,
        })
    }

    pub fn graph(&self) -> &ClusterGraph {
        &self.graph
    }

    pub fn into_graph(self) -> ClusterGraph {
        self.graph
    }

    /// Longest linear segment, start first.
    pub fn spine(&self) -> &[NodeId] {
        &self.spine.nodes
    }

    pub fn length(&self) -> usize {
        self.spine.len()
    }

    pub fn tip(&self) -> Option<NodeId> {
        self.spine.nodes.last().copied()
    }

    /// Counters with the graph-derived fields recomputed.
    pub fn stats(&self) -> GrowthStats {
        let mut s = self.spine.stats.with_graph(&self.graph);
        s.physical_qubits_used = self.spine.physical_extent();
        s
    }

    /// Raw counters without touching the graph.
    pub fn counters(&self) -> &GrowthStats {
        &self.spine.stats
    }

    /// Number of 3-nodes used to start or restart the cluster.
    pub fn seeds(&self) -> usize {
        self.spine.seeds
    }

    /// Pair-preparation rounds spent on seed 3-nodes.
    pub fn seed_rounds(&self) -> usize {
        self.spine.seed_rounds
    }

    /// Prepares a 3-node and tries to fuse its first qubit onto the tip.
    /// An empty cluster is restarted from a fresh 3-node instead. Returns
    /// whether the length grew.
    pub fn attempt_join(&mut self, rng: &mut impl Rng) -> Result<bool> {
        self.spine.attempt_join(&mut self.graph, rng)
    }

    /// Grows until the spine has at least `target` qubits.
    pub fn grow_to(&mut self, target: usize, rng: &mut impl Rng) -> Result<()> {
        self.spine.grow_to(&mut self.graph, target, rng)
    }
}

/// Grows a linear cluster of at least `target_length` qubits with
/// Bernoulli(`model.p`) protocol outcomes.
pub fn grow1d(
    target_length: usize,
    model: &CostModel,
    leaf: LeafChoice,
    rng: &mut impl Rng,
) -> Result<(ClusterGraph, GrowthStats)> {
    if target_length < 3 {
        return Err(Error::InvalidArgument("target length must be at least 3".into()));
    }
    let mut g = LinearGrower::new(model, leaf)?;
    g.grow_to(target_length, rng)?;
    let stats = g.stats();
    Ok((g.into_graph(), stats))
}
