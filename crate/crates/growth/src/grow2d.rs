//! Growth of an `N x N` lattice from parallel rows joined by leaf fusions.
//!
//! Rows are grown as linear clusters in one shared graph. Column `j` of a row
//! is a spine node (the hub) immediately to the right of the hub of column
//! `j - 1`. Each vertical link is a fusion between a leaf of one hub and a
//! leaf of the hub below it; missing leaves are made by `sigma_x` shortening
//! of the spine just right of the hub. Leftover qubits are then `sigma_z`
//! measured and each link qubit is contracted by a `sigma_y` measurement.

use std::collections::BTreeSet;

use rand::Rng;

use crate::cost::CostModel;
use crate::graph::{ClusterGraph, FuseOutcome, LeafChoice, NodeId};
use crate::grow1d::{bernoulli, Spine};
use crate::stats::GrowthStats;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grow2dConfig {
    /// Lattice side `N`.
    pub size: usize,
    pub n: usize,
    /// Per-protocol success probability.
    pub p: f64,
    pub leaf: LeafChoice,
}

impl Grow2dConfig {
    /// Configuration with `p = P_n(theta)`.
    pub fn from_theta(size: usize, n: usize, theta: f64) -> Result<Self> {
        let model = CostModel::from_theta(n, theta, 3.0)?;
        Self::with_p(size, n, model.p)
    }

    pub fn with_p(size: usize, n: usize, p: f64) -> Result<Self> {
        CostModel::new(p, 3.0, n)?;
        Ok(Grow2dConfig {
            size,
            n,
            p,
            leaf: LeafChoice::Tail,
        })
    }

    /// Spine qubits kept beyond the working region so that growth failures
    /// at the tip never reach it.
    fn reserve(&self) -> usize {
        (12.0 / self.p).ceil() as usize + 8
    }

    /// Initial row length: `2N/p` plus the reserve.
    fn initial_length(&self) -> usize {
        (2.0 * self.size as f64 / self.p).ceil() as usize + self.reserve()
    }

    /// Physical qubits per final lattice qubit quoted for three spine qubits
    /// between vertical links: an `(n+1)` by `4(n+1)` block.
    pub fn reference_overhead(&self) -> usize {
        4 * (self.n + 1) * (self.n + 1)
    }
}

/// Node layout of an `N x N` lattice, `rows[r][j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub rows: Vec<Vec<NodeId>>,
}

impl Grid {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Whether `graph` is exactly this lattice: the same live nodes, with
    /// edges between horizontal and vertical neighbours only.
    pub fn matches(&self, graph: &ClusterGraph) -> bool {
        let nodes: BTreeSet<NodeId> = self.rows.iter().flatten().copied().collect();
        let n = self.size();
        if self.rows.iter().any(|r| r.len() != n)
            || nodes.len() != n * n
            || graph.nodes().into_iter().collect::<BTreeSet<_>>() != nodes
        {
            return false;
        }
        let mut want = BTreeSet::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if j + 1 < n {
                    want.insert(ordered(v, row[j + 1]));
                }
                if r + 1 < n {
                    want.insert(ordered(v, self.rows[r + 1][j]));
                }
            }
        }
        graph.edges().into_iter().collect::<BTreeSet<_>>() == want
    }
}

fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn random_bit(rng: &mut impl Rng) -> u8 {
    u8::from(rng.random::<bool>())
}

struct Row {
    spine: Spine,
    /// Spine index of the current hub.
    cursor: usize,
}

impl Row {
    fn hub(&self) -> NodeId {
        self.spine.nodes[self.cursor]
    }

    /// Leaves of the hub that are not spine qubits, lowest id first.
    fn free_leaves(&self, g: &ClusterGraph) -> Vec<NodeId> {
        let near: Vec<NodeId> = [self.cursor.checked_sub(1), Some(self.cursor + 1)]
            .into_iter()
            .flatten()
            .filter_map(|i| self.spine.nodes.get(i).copied())
            .collect();
        g.leaves_of(self.hub())
            .into_iter()
            .filter(|l| !near.contains(l))
            .collect()
    }

    /// Grows the row until `needed` spine qubits follow the hub, plus the
    /// reserve, and protects them from tip failures. Returns the time steps
    /// spent.
    fn ensure_ahead(
        &mut self,
        g: &mut ClusterGraph,
        needed: usize,
        reserve: usize,
        rng: &mut impl Rng,
    ) -> Result<usize> {
        let before = self.spine.stats.time_steps;
        self.spine.floor = self.cursor + needed + 1;
        let want = self.spine.floor + reserve;
        self.spine.grow_to(g, want, rng)?;
        Ok(self.spine.stats.time_steps - before)
    }

    /// Turns the two spine qubits after the hub into a new leaf of the hub,
    /// shortening the row by two.
    fn make_leaf(&mut self, g: &mut ClusterGraph, rng: &mut impl Rng) -> Result<NodeId> {
        let hub = self.hub();
        let [m, s, next] = [1, 2, 3].map(|k| self.spine.nodes[self.cursor + k]);
        for v in [m, s] {
            for l in g.leaves_of(v) {
                if ![hub, m, s, next].contains(&l) {
                    g.z_remove_leaf(l, random_bit(rng))?;
                }
            }
        }
        g.x_measure_shorten(m, s, random_bit(rng))?;
        self.spine.nodes.drain(self.cursor + 1..self.cursor + 3);
        Ok(s)
    }
}

/// Grows an `N x N` lattice with Bernoulli(`p`) protocol outcomes. Returns
/// the final graph, the lattice layout it should match, and the counters.
pub fn grow2d(config: &Grow2dConfig, rng: &mut impl Rng) -> Result<(ClusterGraph, Grid, GrowthStats)> {
    let size = config.size;
    if size < 2 {
        return Err(Error::InvalidArgument("lattice side must be at least 2".into()));
    }
    let model = CostModel::new(config.p, 3.0, config.n)?;
    let reserve = config.reserve();
    let mut g = ClusterGraph::new();
    let mut rows = Vec::with_capacity(size);
    let mut row_time = 0;
    for _ in 0..size {
        let mut spine = Spine::new(&model, config.leaf)?;
        spine.grow_to(&mut g, config.initial_length(), rng)?;
        row_time = row_time.max(spine.stats.time_steps);
        rows.push(Row { spine, cursor: 0 });
    }

    let mut stats = GrowthStats::default();
    let mut extension_time = 0;
    let mut vertical_rounds = 0;
    let mut shorten_rounds = 0;
    let mut hubs = vec![Vec::with_capacity(size); size];
    let mut links = Vec::new();
    for col in 0..size {
        let mut ext = 0;
        for row in rows.iter_mut() {
            if col > 0 {
                row.cursor += 1;
            }
            ext = ext.max(row.ensure_ahead(&mut g, 3, reserve, rng)?);
        }
        extension_time += ext;
        let mut pending: Vec<usize> = (0..size - 1).collect();
        while !pending.is_empty() {
            // Each hub needs one leaf per pending link it takes part in.
            let mut need = vec![0usize; size];
            for &gap in &pending {
                need[gap] += 1;
                need[gap + 1] += 1;
            }
            let mut ext = 0;
            let mut shortened = false;
            let mut leaves = Vec::with_capacity(size);
            for (r, row) in rows.iter_mut().enumerate() {
                let mut free = row.free_leaves(&g);
                let missing = need[r].saturating_sub(free.len());
                if missing > 0 {
                    ext = ext.max(row.ensure_ahead(&mut g, 2 * missing + 1, reserve, rng)?);
                    for _ in 0..missing {
                        free.push(row.make_leaf(&mut g, rng)?);
                    }
                    shortened = true;
                }
                free.truncate(need[r]);
                leaves.push(free);
            }
            extension_time += ext;
            shorten_rounds += usize::from(shortened);
            vertical_rounds += 1;
            let mut failed = Vec::new();
            for &gap in &pending {
                // The last leaf goes down, the first goes up.
                let tip = leaves[gap].pop().expect("leaf for the link below");
                let tail = leaves[gap + 1].remove(0);
                stats.vertical_fusion_attempts += 1;
                stats.protocol_applications += 1;
                if bernoulli(config.p, rng) {
                    let weight = rows[gap].spine.success_weight(rng);
                    g.fuse(tip, tail, FuseOutcome::Success { weight, leaf: LeafChoice::Tail })?;
                    links.push(tip);
                } else {
                    let outcome = FuseOutcome::Failure {
                        tip: random_bit(rng),
                        tail: random_bit(rng),
                    };
                    g.fuse(tip, tail, outcome)?;
                    failed.push(gap);
                }
            }
            pending = failed;
        }
        for (r, row) in rows.iter().enumerate() {
            hubs[r].push(row.hub());
        }
    }

    let keep: BTreeSet<NodeId> = hubs.iter().flatten().chain(&links).copied().collect();
    for v in g.nodes() {
        if !keep.contains(&v) {
            g.z_measure(v, random_bit(rng))?;
        }
    }
    for &l in &links {
        g.y_contract(l, random_bit(rng))?;
    }

    let mut extent = 0;
    for row in &rows {
        let s = &row.spine.stats;
        stats.protocol_applications += s.protocol_applications;
        stats.pair_prep_rounds += s.pair_prep_rounds;
        stats.node_fusion_attempts += s.node_fusion_attempts;
        stats.join_attempts += s.join_attempts;
        extent = extent.max(row.spine.physical_extent());
    }
    stats.time_steps =
        row_time + extension_time + 5 * vertical_rounds + 3 * shorten_rounds + 2 + 3;
    stats.physical_qubits_used = size * (config.n + 1) * extent;
    let stats = stats.with_graph(&g);
    Ok((g, Grid { rows: hubs }, stats))
}
