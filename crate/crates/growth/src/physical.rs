use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use cluster_protocol::{OutcomeSequence, StochasticProtocol};
use cluster_statevector::{Basis, Gate, OutcomeSource, PureState, QubitInit};

use crate::graph::{ClusterGraph, Correction, FuseOutcome, LeafChoice, NodeId};
use crate::Result;

/// A graph state held both abstractly and as amplitudes, with spare qubits
/// for the middle of fusion chains.
#[derive(Debug, Clone)]
pub struct PhysicalCluster {
    graph: ClusterGraph,
    state: PureState,
    qubit: BTreeMap<NodeId, usize>,
    ancillas: Vec<usize>,
}

impl PhysicalCluster {
    pub fn new(graph: ClusterGraph, ancillas: usize) -> Result<Self> {
        let nodes = graph.nodes();
        let mut state = graph.canonical_state(&nodes)?;
        if ancillas > 0 {
            state = state.tensor(&PureState::from_product(&vec![QubitInit::Plus; ancillas])?);
        }
        let qubit = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ok(PhysicalCluster {
            graph,
            state,
            qubit,
            ancillas: (nodes.len()..nodes.len() + ancillas).collect(),
        })
    }

    pub fn graph(&self) -> &ClusterGraph {
        &self.graph
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn qubit(&self, v: NodeId) -> usize {
        self.qubit[&v]
    }

    /// Fidelity between the live qubits and the graph's canonical state.
    pub fn fidelity(&self) -> Result<f64> {
        let nodes = self.graph.nodes();
        let want = self.graph.canonical_state(&nodes)?;
        let keep: Vec<usize> = nodes.iter().map(|v| self.qubit[v]).collect();
        Ok(self.state.extract(&keep)?.fidelity(&want)?)
    }

    fn correct(&mut self, corrections: Vec<Correction>) -> Result<()> {
        for (v, gate) in corrections {
            self.state.apply(self.qubit[&v], gate)?;
        }
        Ok(())
    }

    /// Runs the imperfect protocol between `tip` and `tail` on fresh ancillas
    /// and applies the outcome to the graph. Returns whether it succeeded.
    pub fn fuse(
        &mut self,
        tip: NodeId,
        tail: NodeId,
        protocol: &StochasticProtocol,
        leaf: LeafChoice,
        mut source: impl OutcomeSource,
    ) -> Result<bool> {
        let spec = *protocol.spec();
        if self.ancillas.len() < spec.n {
            return Err(crate::Error::InvalidArgument(format!(
                "fusion needs {} ancillas, have {}",
                spec.n,
                self.ancillas.len()
            )));
        }
        let mids = self.ancillas[..spec.n].to_vec();
        for &q in &mids {
            self.state.reset(q, QubitInit::Plus)?;
        }
        let mut chain = vec![self.qubit[&tip]];
        chain.extend(&mids);
        chain.push(self.qubit[&tail]);
        for w in chain.windows(2) {
            self.state
                .apply_controlled_phase(w[0], w[1], spec.phase(), spec.entangler)?;
        }
        let mut bits = Vec::with_capacity(spec.n);
        for &q in &mids {
            bits.push(self.state.measure(q, Basis::X, &mut source)?.outcome);
        }
        let seq = OutcomeSequence::new(bits)?;
        if protocol.is_success(&seq) {
            let fixes = self.graph.fuse(
                tip,
                tail,
                FuseOutcome::Success {
                    weight: seq.hamming_weight(),
                    leaf,
                },
            )?;
            self.correct(fixes)?;
            Ok(true)
        } else {
            let a = self.state.measure(self.qubit[&tip], Basis::Z, &mut source)?.outcome;
            let b = self.state.measure(self.qubit[&tail], Basis::Z, &mut source)?.outcome;
            self.graph.fuse(tip, tail, FuseOutcome::Failure { tip: a, tail: b })?;
            Ok(false)
        }
    }

    pub fn resolve_hadamard(&mut self, node: NodeId, choice: LeafChoice) -> Result<()> {
        let fixes = self.graph.resolve_hadamard(node, choice)?;
        self.correct(fixes)
    }

    pub fn z_remove_leaf(&mut self, v: NodeId, source: impl OutcomeSource) -> Result<u8> {
        if !self.graph.is_leaf(v) {
            return Err(crate::Error::NotALeaf(v));
        }
        let m = self.state.measure(self.qubit[&v], Basis::Z, source)?.outcome;
        self.graph.z_remove_leaf(v, m)?;
        Ok(m)
    }

    pub fn x_measure(&mut self, a: NodeId, b0: NodeId, source: impl OutcomeSource) -> Result<u8> {
        if !self.graph.has_edge(a, b0) {
            return Err(crate::Error::NotNeighbor(a, b0));
        }
        let m = self.state.measure(self.qubit[&a], Basis::X, source)?.outcome;
        let fixes = self.graph.x_measure(a, b0, m)?;
        self.correct(fixes)?;
        Ok(m)
    }

    pub fn x_measure_shorten(
        &mut self,
        node: NodeId,
        leaf_side: NodeId,
        source: impl OutcomeSource,
    ) -> Result<u8> {
        // Validate first so a rejected call leaves the register untouched.
        self.graph.clone().x_measure_shorten(node, leaf_side, 0)?;
        self.x_measure(node, leaf_side, source)
    }

    pub fn y_contract(&mut self, a: NodeId, source: impl OutcomeSource) -> Result<u8> {
        self.graph.clone().y_contract(a, 0)?;
        // Outcome 0 is (|0> + i|1>)/sqrt2.
        let m = self
            .state
            .measure(self.qubit[&a], Basis::Xi(-FRAC_PI_2), source)?
            .outcome;
        let fixes = self.graph.y_contract(a, m)?;
        self.correct(fixes)?;
        Ok(m)
    }

    /// Applies `Z` physically to undo a node's recorded byproduct.
    pub fn clear_byproduct(&mut self, v: NodeId) -> Result<()> {
        if self.graph.byproduct(v) {
            self.state.apply(self.qubit[&v], Gate::Z)?;
            self.graph.flip_byproduct(v)?;
        }
        Ok(())
    }
}
