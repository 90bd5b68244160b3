//! Closed-form resource estimates for 3-node growth.

use cluster_protocol::success_probability_closed;

use crate::{Error, Result};

/// Published headline for mean 1D time steps per unit length.
pub const PUBLISHED_T1D_PER_LENGTH: f64 = 23.0;
/// Published headline for the slope of 2D time steps in `N`.
pub const PUBLISHED_T2D_SLOPE: f64 = 65.0;
/// Time steps to turn an array of long rows into a 2D lattice.
pub const ASSEMBLY_TIME_STEPS: f64 = 10.0;

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("success probability {p} not in (0, 1]")));
    }
    Ok(())
}

fn check_ell(ell: f64) -> Result<()> {
    if ell.is_nan() || ell < 2.0 {
        return Err(Error::InvalidArgument(format!("small-cluster length {ell} below 2")));
    }
    Ok(())
}

/// `s_a`: mean number of simultaneous rounds to obtain two neighbouring
/// 2-chains when each chain succeeds with probability `p` per round.
pub fn expected_pair_prep_attempts(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((1.0 + (1.0 - p) / (2.0 - p)) / p)
}

/// `s_b = s_a / p`: mean protocol rounds to produce one 3-node.
pub fn expected_three_node_protocols(p: f64) -> Result<f64> {
    Ok(expected_pair_prep_attempts(p)? / p)
}

/// Mean length gain per fusion attempt, averaged over two consecutive
/// attempts from an end with two leaves.
pub fn expected_length_gain(p: f64, ell: f64) -> Result<f64> {
    check_p(p)?;
    check_ell(ell)?;
    Ok(p * ell - 0.5 * (1.0 + p * p))
}

/// Fusing a cluster with `links` edges gains `links + 1` edges on success and
/// loses one on failure, so growth is net positive iff `links > 1/p - 2`.
pub fn net_growth_condition(links: f64, p: f64) -> Result<bool> {
    check_p(p)?;
    Ok(links > 1.0 / p - 2.0)
}

fn positive_gain(p: f64, ell: f64) -> Result<f64> {
    let d = expected_length_gain(p, ell)?;
    if d <= 0.0 {
        return Err(Error::NoNetGrowth(d));
    }
    Ok(d)
}

/// `t_1D = 5 (l_C / dl) (s_b + 1)`.
pub fn time_steps_1d(target_length: f64, p: f64, ell: f64) -> Result<f64> {
    let d = positive_gain(p, ell)?;
    Ok(5.0 * target_length / d * (expected_three_node_protocols(p)? + 1.0))
}

/// `t_2D = [10 / (p dl)] (s_b + 1) N + 10`.
pub fn time_steps_2d(size: f64, p: f64, ell: f64) -> Result<f64> {
    let d = positive_gain(p, ell)?;
    Ok(10.0 / (p * d) * (expected_three_node_protocols(p)? + 1.0) * size + ASSEMBLY_TIME_STEPS)
}

/// Parameters of a growth run: protocol success probability, small-cluster
/// length and protocol size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub p: f64,
    pub ell: f64,
    pub n: usize,
}

impl CostModel {
    pub fn new(p: f64, ell: f64, n: usize) -> Result<Self> {
        check_p(p)?;
        check_ell(ell)?;
        Ok(CostModel { p, ell, n })
    }

    /// Model with `p = P_n(theta)`.
    pub fn from_theta(n: usize, theta: f64, ell: f64) -> Result<Self> {
        Self::new(success_probability_closed(n, theta)?, ell, n)
    }

    pub fn s_a(&self) -> f64 {
        (1.0 + (1.0 - self.p) / (2.0 - self.p)) / self.p
    }

    pub fn s_b(&self) -> f64 {
        self.s_a() / self.p
    }

    pub fn length_gain(&self) -> f64 {
        self.p * self.ell - 0.5 * (1.0 + self.p * self.p)
    }

    pub fn report(&self) -> Result<FormulaReport> {
        let d = positive_gain(self.p, self.ell)?;
        let s1d = (self.s_b() + 1.0) / d;
        Ok(FormulaReport {
            p: self.p,
            ell: self.ell,
            n: self.n,
            s_a: self.s_a(),
            s_b: self.s_b(),
            length_gain: d,
            s1d_per_length: s1d,
            t1d_per_length: time_steps_1d(1.0, self.p, self.ell)?,
            t2d_slope: time_steps_2d(1.0, self.p, self.ell)? - ASSEMBLY_TIME_STEPS,
            t2d_intercept: ASSEMBLY_TIME_STEPS,
            published_t1d_per_length: PUBLISHED_T1D_PER_LENGTH,
            published_t2d_slope: PUBLISHED_T2D_SLOPE,
        })
    }
}

/// Direct evaluations of the cost formulas next to the published headline
/// numbers they are usually quoted as.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaReport {
    pub p: f64,
    pub ell: f64,
    pub n: usize,
    pub s_a: f64,
    pub s_b: f64,
    pub length_gain: f64,
    /// Protocol rounds per unit length, `(s_b + 1) / dl`.
    pub s1d_per_length: f64,
    /// Time steps per unit length, five per round.
    pub t1d_per_length: f64,
    pub t2d_slope: f64,
    pub t2d_intercept: f64,
    pub published_t1d_per_length: f64,
    pub published_t2d_slope: f64,
}
