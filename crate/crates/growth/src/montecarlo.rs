//! Seeded Monte-Carlo estimates of growth costs.
//!
//! Trial `i` of a run with master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`, so results do not depend on
//! how trials are scheduled across threads.

use cluster_protocol::Estimate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;

use crate::cost::{expected_pair_prep_attempts, CostModel};
use crate::graph::{ClusterGraph, FuseOutcome, LeafChoice};
use crate::grow1d::{bernoulli, sample_three_node, LinearGrower};
use crate::grow2d::{grow2d, Grow2dConfig};
use crate::{Error, Result};

/// RNG for trial `index` under master `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn run_trials<T, F>(trials: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i as u64)))
        .collect()
}

/// Rounds until two chains, retried independently, have both succeeded.
pub fn mc_pair_prep_rounds(p: f64, trials: usize, seed: u64) -> Result<Estimate> {
    expected_pair_prep_attempts(p)?;
    let geo = Geometric::new(p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let v = run_trials(trials, seed, |rng| {
        Ok((geo.sample(rng).max(geo.sample(rng)) + 1) as f64)
    })?;
    Ok(Estimate::from_samples(&v))
}

/// Pair-preparation rounds per 3-node, including rounds lost to failed
/// fusions.
pub fn mc_three_node_rounds(p: f64, trials: usize, seed: u64) -> Result<Estimate> {
    expected_pair_prep_attempts(p)?;
    let v = run_trials(trials, seed, |rng| Ok(sample_three_node(p, rng)?.pair_rounds as f64))?;
    Ok(Estimate::from_samples(&v))
}

/// Length gain per fusion attempt, averaged over two consecutive join
/// attempts that start from a fresh 3-node end with two leaves.
pub fn mc_length_gain(p: f64, trials: usize, seed: u64) -> Result<Estimate> {
    let model = CostModel::new(p, 3.0, 3)?;
    let v = run_trials(trials, seed, |rng| {
        let mut g = LinearGrower::new(&model, LeafChoice::Tail)?;
        g.grow_to(3, rng)?;
        g.attempt_join(rng)?;
        g.attempt_join(rng)?;
        Ok((g.length() as f64 - 3.0) / 2.0)
    })?;
    Ok(Estimate::from_samples(&v))
}

/// Change in the link count of a growing path when a path with `links`
/// edges is fused onto its end.
pub fn mc_link_change(links: usize, p: f64, trials: usize, seed: u64) -> Result<Estimate> {
    CostModel::new(p, 3.0, 3)?;
    if links == 0 {
        return Err(Error::InvalidArgument("small cluster needs at least one link".into()));
    }
    let v = run_trials(trials, seed, |rng| {
        let (mut g, growing) = ClusterGraph::path(4);
        let before = g.link_count() as f64;
        let small = g.add_path(links + 1);
        let tip = growing[3];
        if bernoulli(p, rng) {
            g.fuse(tip, small[0], FuseOutcome::Success { weight: 0, leaf: LeafChoice::Tail })?;
        } else {
            let bits = [rng.random::<bool>(), rng.random::<bool>()].map(u8::from);
            g.fuse(tip, small[0], FuseOutcome::Failure { tip: bits[0], tail: bits[1] })?;
            // The rest of the small cluster is discarded.
            for &v in &small[1..] {
                g.z_measure(v, 0)?;
            }
            return Ok(g.link_count() as f64 - before);
        }
        Ok(g.link_count() as f64 - before)
    })?;
    Ok(Estimate::from_samples(&v))
}

/// Aggregate results of seeded 1D growth trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grow1dSummary {
    pub trials: usize,
    pub target_length: usize,
    pub mean_final_length: f64,
    pub mean_protocol_applications: f64,
    pub mean_join_attempts: f64,
    pub mean_time_steps: f64,
    /// Pair-preparation rounds plus join attempts per unit of length grown
    /// beyond the seed 3-node, as a ratio of totals.
    pub rounds_per_length: f64,
    /// All protocol applications per unit of final length.
    pub protocols_per_length: f64,
    /// `(s_b + 1) / dl` for the same `p`.
    pub formula_rounds_per_length: f64,
    pub max_seeds: usize,
}

pub fn grow1d_trials(
    target_length: usize,
    model: &CostModel,
    trials: usize,
    seed: u64,
) -> Result<Grow1dSummary> {
    if target_length < 3 {
        return Err(Error::InvalidArgument("target length must be at least 3".into()));
    }
    let formula = model.report()?.s1d_per_length;
    let runs = run_trials(trials, seed, |rng| {
        let mut g = LinearGrower::new(model, LeafChoice::Tail)?;
        g.grow_to(target_length, rng)?;
        let s = *g.counters();
        Ok((s, g.length(), g.seeds(), g.seed_rounds()))
    })?;
    let k = trials as f64;
    let (mut len, mut apps, mut joins, mut time, mut rounds, mut grown) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut max_seeds = 0;
    for (s, l, seeds, seed_rounds) in &runs {
        len += *l as f64;
        apps += s.protocol_applications as f64;
        joins += s.join_attempts as f64;
        time += s.time_steps as f64;
        rounds += (s.pair_prep_rounds - seed_rounds + s.join_attempts) as f64;
        grown += (*l as f64) - 3.0 * *seeds as f64;
        max_seeds = max_seeds.max(*seeds);
    }
    Ok(Grow1dSummary {
        trials,
        target_length,
        mean_final_length: len / k,
        mean_protocol_applications: apps / k,
        mean_join_attempts: joins / k,
        mean_time_steps: time / k,
        rounds_per_length: rounds / grown,
        protocols_per_length: apps / len,
        formula_rounds_per_length: formula,
        max_seeds,
    })
}

/// Aggregate results of seeded 2D growth trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grow2dSummary {
    pub trials: usize,
    pub size: usize,
    pub grids_achieved: usize,
    pub mean_protocol_applications: f64,
    pub mean_vertical_attempts: f64,
    pub mean_time_steps: f64,
    pub mean_physical_qubits: f64,
    /// Mean physical qubits per final lattice qubit.
    pub mean_overhead_per_qubit: f64,
    pub reference_overhead: usize,
}

pub fn grow2d_trials(config: &Grow2dConfig, trials: usize, seed: u64) -> Result<Grow2dSummary> {
    let runs = run_trials(trials, seed, |rng| {
        let (g, grid, stats) = grow2d(config, rng)?;
        Ok((grid.matches(&g), stats))
    })?;
    let k = trials as f64;
    let cells = (config.size * config.size) as f64;
    let mut out = Grow2dSummary {
        trials,
        size: config.size,
        grids_achieved: 0,
        mean_protocol_applications: 0.0,
        mean_vertical_attempts: 0.0,
        mean_time_steps: 0.0,
        mean_physical_qubits: 0.0,
        mean_overhead_per_qubit: 0.0,
        reference_overhead: config.reference_overhead(),
    };
    for (ok, s) in &runs {
        out.grids_achieved += usize::from(*ok);
        out.mean_protocol_applications += s.protocol_applications as f64 / k;
        out.mean_vertical_attempts += s.vertical_fusion_attempts as f64 / k;
        out.mean_time_steps += s.time_steps as f64 / k;
        out.mean_physical_qubits += s.physical_qubits_used as f64 / k;
    }
    out.mean_overhead_per_qubit = out.mean_physical_qubits / cells;
    Ok(out)
}
