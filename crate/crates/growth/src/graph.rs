//! Abstract graph states with classical byproduct bookkeeping.
//!
//! A graph `G` with pending-Hadamard set `P` and byproduct set `B` stands for
//! the physical state `Z_B H_P |G>`, where `|G>` is the usual graph state
//! `prod CZ |+...+>`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;

use cluster_statevector::{Gate, PureState, QubitInit, C64};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Interior,
    Leaf,
    Isolated,
    Detached,
}

/// Which of the two fused qubits takes the Hadamard on success.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafChoice {
    Tail,
    Tip,
    /// Leave the Hadamard on the tail, trapped between entangling links.
    Deferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuseOutcome {
    /// `weight` is the Hamming weight of the successful outcome sequence.
    Success { weight: usize, leaf: LeafChoice },
    /// Z-measurement outcomes of tip and tail.
    Failure { tip: u8, tail: u8 },
}

/// Local unitary the physical register needs after a measurement rewrite.
pub type Correction = (NodeId, Gate);

#[derive(Debug, Clone, Default)]
struct Node {
    neighbors: BTreeSet<NodeId>,
    detached: bool,
    pending_hadamard: bool,
    byproduct: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ClusterGraph {
    nodes: BTreeMap<NodeId, Node>,
    next: usize,
}

impl ClusterGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Path graph on `len` fresh nodes, returned left to right.
    pub fn path(len: usize) -> (Self, Vec<NodeId>) {
        let mut g = Self::new();
        let ids = g.add_path(len);
        (g, ids)
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.next);
        self.next += 1;
        self.nodes.insert(id, Node::default());
        id
    }

    pub fn add_path(&mut self, len: usize) -> Vec<NodeId> {
        let ids: Vec<NodeId> = (0..len).map(|_| self.add_node()).collect();
        for w in ids.windows(2) {
            self.link(w[0], w[1]);
        }
        ids
    }

    /// Star with `leaves` leaves; returns `(centre, leaves)`.
    pub fn add_star(&mut self, leaves: usize) -> (NodeId, Vec<NodeId>) {
        let c = self.add_node();
        let ls = (0..leaves)
            .map(|_| {
                let l = self.add_node();
                self.link(c, l);
                l
            })
            .collect();
        (c, ls)
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        self.alive(a)?;
        self.alive(b)?;
        if a == b {
            return Err(Error::SelfEdge(a));
        }
        self.link(a, b);
        Ok(())
    }

    fn link(&mut self, a: NodeId, b: NodeId) {
        self.nodes.get_mut(&a).map(|n| n.neighbors.insert(b));
        self.nodes.get_mut(&b).map(|n| n.neighbors.insert(a));
    }

    fn unlink(&mut self, a: NodeId, b: NodeId) {
        self.nodes.get_mut(&a).map(|n| n.neighbors.remove(&b));
        self.nodes.get_mut(&b).map(|n| n.neighbors.remove(&a));
    }

    fn toggle(&mut self, a: NodeId, b: NodeId) {
        if self.has_edge(a, b) {
            self.unlink(a, b);
        } else {
            self.link(a, b);
        }
    }

    fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(&id).ok_or(Error::UnknownNode(id))
    }

    fn alive(&self, id: NodeId) -> Result<&Node> {
        let n = self.node(id)?;
        if n.detached {
            return Err(Error::Detached(id));
        }
        Ok(n)
    }

    fn node_mut(&mut self, id: NodeId) -> &mut Node {
        self.nodes.get_mut(&id).expect("node checked by caller")
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.get(&id).is_some_and(|n| !n.detached)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.nodes.get(&a).is_some_and(|n| n.neighbors.contains(&b))
    }

    pub fn neighbors(&self, id: NodeId) -> Result<&BTreeSet<NodeId>> {
        Ok(&self.node(id)?.neighbors)
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.nodes.get(&id).map_or(0, |n| n.neighbors.len())
    }

    pub fn role(&self, id: NodeId) -> Result<Role> {
        let n = self.node(id)?;
        Ok(match (n.detached, n.neighbors.len()) {
            (true, _) => Role::Detached,
            (false, 0) => Role::Isolated,
            (false, 1) => Role::Leaf,
            _ => Role::Interior,
        })
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.role(id) == Ok(Role::Leaf)
    }

    /// Degree-one neighbours of `id`.
    pub fn leaves_of(&self, id: NodeId) -> Vec<NodeId> {
        self.nodes
            .get(&id)
            .map(|n| {
                n.neighbors
                    .iter()
                    .copied()
                    .filter(|&v| self.degree(v) == 1)
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn byproduct(&self, id: NodeId) -> bool {
        self.nodes.get(&id).is_some_and(|n| n.byproduct)
    }

    pub fn pending_hadamard(&self, id: NodeId) -> bool {
        self.nodes.get(&id).is_some_and(|n| n.pending_hadamard)
    }

    pub fn flip_byproduct(&mut self, id: NodeId) -> Result<()> {
        self.alive(id)?;
        let n = self.node_mut(id);
        n.byproduct = !n.byproduct;
        Ok(())
    }

    /// Live nodes in id order.
    pub fn nodes(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|(_, n)| !n.detached)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn detached_count(&self) -> usize {
        self.nodes.values().filter(|n| n.detached).count()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len() - self.detached_count()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes
            .iter()
            .flat_map(|(&a, n)| n.neighbors.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn link_count(&self) -> usize {
        self.edges().len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes().into_iter().filter(|&v| self.degree(v) == 1).count()
    }

    fn detach(&mut self, id: NodeId) {
        let nbrs: Vec<NodeId> = self.node_mut(id).neighbors.iter().copied().collect();
        for v in nbrs {
            self.unlink(id, v);
        }
        let n = self.node_mut(id);
        n.detached = true;
        n.byproduct = false;
        n.pending_hadamard = false;
    }

    fn ensure_no_pending(&self) -> Result<()> {
        match self.nodes.iter().find(|(_, n)| n.pending_hadamard) {
            Some((&id, _)) => Err(Error::PendingHadamard(id)),
            None => Ok(()),
        }
    }

    /// Local complementation at `v`: toggles every edge between neighbours.
    pub fn local_complement(&mut self, v: NodeId) -> Result<()> {
        let nbrs: Vec<NodeId> = self.alive(v)?.neighbors.iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                self.toggle(a, b);
            }
        }
        Ok(())
    }

    /// Number of qubits in the longest path. Exact on forests.
    pub fn longest_linear_segment(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut best = 0;
        for v in self.nodes() {
            if seen.contains(&v) {
                continue;
            }
            let (far, _, comp) = self.bfs(v);
            let (_, d, _) = self.bfs(far);
            best = best.max(d + 1);
            seen.extend(comp);
        }
        best
    }

    /// Farthest node from `s`, its distance, and the visited component.
    fn bfs(&self, s: NodeId) -> (NodeId, usize, Vec<NodeId>) {
        let mut dist = BTreeMap::from([(s, 0usize)]);
        let mut queue = VecDeque::from([s]);
        let mut far = (s, 0);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du > far.1 {
                far = (u, du);
            }
            for &w in &self.nodes[&u].neighbors {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(du + 1);
                    queue.push_back(w);
                }
            }
        }
        (far.0, far.1, dist.into_keys().collect())
    }

    /// The physical state `Z_B H_P |G>` on `order`, which must list every live
    /// node once.
    pub fn canonical_state(&self, order: &[NodeId]) -> Result<PureState> {
        let live = self.nodes();
        let mut sorted = order.to_vec();
        sorted.sort();
        if sorted != live {
            return Err(Error::InvalidArgument(
                "order must list every live node exactly once".into(),
            ));
        }
        let index: BTreeMap<NodeId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut s = PureState::from_product(&vec![QubitInit::Plus; order.len()])?;
        for (a, b) in self.edges() {
            s.apply_cz(index[&a], index[&b])?;
        }
        for &v in order {
            if self.pending_hadamard(v) {
                s.apply(index[&v], Gate::H)?;
            }
            if self.byproduct(v) {
                s.apply(index[&v], Gate::Z)?;
            }
        }
        Ok(s)
    }

    /// Applies a fusion outcome between `tip` and the leaf `tail`.
    ///
    /// On success the tail is joined to the tip and the tip inherits the
    /// tail's old neighbourhood by symmetric difference. On failure both are
    /// Z-measured and detached.
    pub fn fuse(&mut self, tip: NodeId, tail: NodeId, outcome: FuseOutcome) -> Result<Vec<Correction>> {
        self.alive(tip)?;
        self.alive(tail)?;
        if tip == tail {
            return Err(Error::SelfEdge(tip));
        }
        if self.degree(tail) != 1 {
            return Err(Error::NotALeaf(tail));
        }
        if self.has_edge(tip, tail) {
            return Err(Error::Adjacent(tip, tail));
        }
        self.ensure_no_pending()?;
        match outcome {
            FuseOutcome::Failure { tip: a, tail: b } => {
                self.z_measure_unchecked(tip, a);
                self.z_measure_unchecked(tail, b);
            }
            FuseOutcome::Success { weight, leaf } => {
                let nt = self.node(tip)?.neighbors.clone();
                let nl = self.node(tail)?.neighbors.clone();
                for &v in &nl {
                    self.unlink(tail, v);
                    if nt.contains(&v) {
                        self.unlink(tip, v);
                    } else {
                        self.link(tip, v);
                    }
                }
                self.link(tip, tail);
                let n = self.node_mut(tail);
                n.pending_hadamard = true;
                n.byproduct ^= weight % 2 == 1;
                return self.resolve_hadamard(tail, leaf);
            }
        }
        Ok(Vec::new())
    }

    /// Removes the trapped Hadamard on the leaf `node` by applying `H` to it
    /// (`Tail`) or to its unique neighbour (`Tip`, which then becomes the leaf).
    pub fn resolve_hadamard(&mut self, node: NodeId, choice: LeafChoice) -> Result<Vec<Correction>> {
        if !self.alive(node)?.pending_hadamard {
            return Err(Error::InvalidArgument(format!("{node} has no pending Hadamard")));
        }
        if self.degree(node) != 1 {
            return Err(Error::NotALeaf(node));
        }
        let partner = *self.node(node)?.neighbors.first().expect("degree one");
        let (bl, bp) = (self.byproduct(node), self.byproduct(partner));
        let target = match choice {
            LeafChoice::Deferred => return Ok(Vec::new()),
            LeafChoice::Tail => {
                // X on a leaf equals Z on its neighbour.
                self.node_mut(node).byproduct = false;
                self.node_mut(partner).byproduct = bp ^ bl;
                node
            }
            LeafChoice::Tip => {
                let others: Vec<NodeId> = self.node(partner)?.neighbors.iter().copied().filter(|&v| v != node).collect();
                for v in others {
                    self.unlink(partner, v);
                    self.link(node, v);
                }
                self.node_mut(partner).byproduct = false;
                self.node_mut(node).byproduct = bp ^ bl;
                partner
            }
        };
        self.node_mut(node).pending_hadamard = false;
        Ok(vec![(target, Gate::H)])
    }

    fn z_measure_unchecked(&mut self, v: NodeId, outcome: u8) {
        if outcome & 1 == 1 {
            let nbrs: Vec<NodeId> = self.node_mut(v).neighbors.iter().copied().collect();
            for w in nbrs {
                self.node_mut(w).byproduct ^= true;
            }
        }
        self.detach(v);
    }

    /// Z-measures any live node.
    pub fn z_measure(&mut self, v: NodeId, outcome: u8) -> Result<()> {
        self.alive(v)?;
        self.ensure_no_pending()?;
        self.z_measure_unchecked(v, outcome);
        Ok(())
    }

    /// Z-measures a leaf, detaching it from its neighbour.
    pub fn z_remove_leaf(&mut self, v: NodeId, outcome: u8) -> Result<()> {
        self.alive(v)?;
        if self.degree(v) != 1 {
            return Err(Error::NotALeaf(v));
        }
        self.z_measure(v, outcome)
    }

    /// Measures `a` in the X basis with special neighbour `b0`. The graph
    /// becomes `tau_b0(tau_a(tau_b0(G)) - a)`; the returned correction undoes
    /// the residual Clifford on `b0`.
    pub fn x_measure(&mut self, a: NodeId, b0: NodeId, outcome: u8) -> Result<Vec<Correction>> {
        self.alive(a)?;
        self.ensure_no_pending()?;
        if !self.has_edge(a, b0) {
            return Err(Error::NotNeighbor(a, b0));
        }
        let m = (outcome ^ u8::from(self.byproduct(a))) & 1;
        let na = self.node(a)?.neighbors.clone();
        let nb = self.node(b0)?.neighbors.clone();
        let flips: Vec<NodeId> = if m == 0 {
            na.iter().filter(|&&c| c != b0 && !nb.contains(&c)).copied().collect()
        } else {
            nb.iter().filter(|&&c| c != a && !na.contains(&c)).copied().collect()
        };
        let b0_byproduct = self.byproduct(b0);
        self.local_complement(b0)?;
        self.local_complement(a)?;
        self.local_complement(b0)?;
        self.detach(a);
        for c in flips {
            self.node_mut(c).byproduct ^= true;
        }
        if b0_byproduct {
            // The correction turns Z on b0 into X on b0, which acts on |G'>
            // as Z on every neighbour.
            self.node_mut(b0).byproduct = false;
            let nbrs: Vec<NodeId> = self.node(b0)?.neighbors.iter().copied().collect();
            for c in nbrs {
                self.node_mut(c).byproduct ^= true;
            }
        }
        Ok(vec![(b0, sqrt_iy_inverse(m))])
    }

    /// X-measures `node`, a degree-two node whose neighbours are not linked,
    /// making `leaf_side` a new leaf of the other neighbour. The other
    /// neighbour inherits the rest of `leaf_side`'s links, so a path loses two
    /// qubits of length.
    pub fn x_measure_shorten(&mut self, node: NodeId, leaf_side: NodeId, outcome: u8) -> Result<Vec<Correction>> {
        let nbrs = &self.alive(node)?.neighbors;
        if nbrs.len() != 2 || !nbrs.contains(&leaf_side) {
            return Err(Error::NotLinear(node));
        }
        let other = *nbrs.iter().find(|&&v| v != leaf_side).expect("two neighbours");
        if self.has_edge(other, leaf_side) {
            return Err(Error::NotLinear(node));
        }
        self.x_measure(node, leaf_side, outcome)
    }

    /// Measures a degree-two node in the Y basis, joining its two neighbours
    /// directly (`tau_a(G) - a`).
    pub fn y_contract(&mut self, a: NodeId, outcome: u8) -> Result<Vec<Correction>> {
        let nbrs: Vec<NodeId> = self.alive(a)?.neighbors.iter().copied().collect();
        self.ensure_no_pending()?;
        if nbrs.len() != 2 || self.has_edge(nbrs[0], nbrs[1]) {
            return Err(Error::NotLinear(a));
        }
        let m = (outcome ^ u8::from(self.byproduct(a))) & 1;
        self.local_complement(a)?;
        self.detach(a);
        Ok(nbrs.into_iter().map(|b| (b, sqrt_iz_inverse(m))).collect())
    }
}

/// Inverse of the residual `sqrt(+-iY)` left on the special neighbour after an
/// X measurement with effective outcome `m`.
fn sqrt_iy_inverse(m: u8) -> Gate {
    let h = FRAC_1_SQRT_2;
    let s = if m == 0 { 1.0 } else { -1.0 };
    // exp(-i s pi/4 Y)
    Gate::Matrix([
        [C64::new(h, 0.0), C64::new(-s * h, 0.0)],
        [C64::new(s * h, 0.0), C64::new(h, 0.0)],
    ])
}

/// Inverse of the residual `sqrt(-+iZ)` on each neighbour after a Y
/// measurement with effective outcome `m`.
fn sqrt_iz_inverse(m: u8) -> Gate {
    Gate::Rz(if m == 0 { -FRAC_PI_2 } else { FRAC_PI_2 })
}
