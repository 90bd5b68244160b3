use crate::graph::ClusterGraph;

/// Resource counters for one growth run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GrowthStats {
    /// Every application of the stochastic protocol, successful or not.
    pub protocol_applications: usize,
    /// Simultaneous rounds spent preparing neighbouring pairs of 2-chains.
    pub pair_prep_rounds: usize,
    /// Attempts to fuse a pair of 2-chains into a 3-node.
    pub node_fusion_attempts: usize,
    /// Attempts to fuse a 3-node onto a growing cluster.
    pub join_attempts: usize,
    /// Attempts to fuse leaves of adjacent rows.
    pub vertical_fusion_attempts: usize,
    pub time_steps: usize,
    /// Qubits in the longest linear segment.
    pub final_length: usize,
    pub link_count: usize,
    pub leaf_count: usize,
    pub physical_qubits_used: usize,
}

impl GrowthStats {
    /// Fills the graph-derived fields from `graph`.
    pub fn with_graph(mut self, graph: &ClusterGraph) -> Self {
        self.final_length = graph.longest_linear_segment();
        self.link_count = graph.link_count();
        self.leaf_count = graph.leaf_count();
        self
    }

    /// Sums every counter; graph-derived fields are left as in `self`.
    pub fn add_counts(&mut self, other: &GrowthStats) {
        self.protocol_applications += other.protocol_applications;
        self.pair_prep_rounds += other.pair_prep_rounds;
        self.node_fusion_attempts += other.node_fusion_attempts;
        self.join_attempts += other.join_attempts;
        self.vertical_fusion_attempts += other.vertical_fusion_attempts;
        self.time_steps += other.time_steps;
    }
}
