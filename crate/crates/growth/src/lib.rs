//! Growing cluster states by fusing small clusters with the stochastic
//! protocol.
//!
//! Small instances run on the dense simulator; large growth runs use the
//! abstract [`ClusterGraph`] with Bernoulli fusion outcomes. The two meet in
//! [`PhysicalCluster`], which applies every rewrite to both at once.

mod cost;
mod error;
mod graph;
mod grow1d;
mod grow2d;
mod layout;
mod montecarlo;
mod physical;
mod pipeline;
mod stats;

pub use cost::{
    expected_length_gain, expected_pair_prep_attempts, expected_three_node_protocols,
    net_growth_condition, time_steps_1d, time_steps_2d, CostModel, FormulaReport,
    ASSEMBLY_TIME_STEPS, PUBLISHED_T1D_PER_LENGTH, PUBLISHED_T2D_SLOPE,
};
pub use error::{Error, Result};
pub use graph::{ClusterGraph, Correction, FuseOutcome, LeafChoice, NodeId, Role};
pub use grow1d::{grow1d, LinearGrower};
pub use grow2d::{grow2d, Grid, Grow2dConfig};
pub use layout::selective_layout;
pub use montecarlo::{
    grow1d_trials, grow2d_trials, mc_length_gain, mc_link_change, mc_pair_prep_rounds,
    mc_three_node_rounds, trial_rng, Grow1dSummary, Grow2dSummary,
};
pub use physical::PhysicalCluster;
pub use pipeline::{
    run_thirteen_qubit_pipeline, Attempt, PipelineConfig, PipelineResult, Stage, NODE_QUBITS,
};
pub use stats::GrowthStats;
