//! Uniform-sampling coresets on ring datasets.
//!
//! The whole point of the reduction is that on a ring, plain uniform sampling
//! (weight-proportional on weighted input) with count-based reweighting is
//! already a coreset with additive error; no sensitivities anywhere.

use crate::dataset::{ClusteringParams, WeightedPointSet};
use crate::error::{Error, Result};
use crate::metric::PointId;
use crate::rng::rng_for;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    AssignmentPreserving,
    Unconstrained,
}

/// Which assignment-preserving budget to charge: the conservative eps^-5
/// form, or the eps^-3 form with the reduced dimension folded into the
/// squared log factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetForm {
    Eps5,
    Eps3WithDim,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Leading constant for assignment-preserving budgets.
    pub c0: f64,
    /// Leading constant for unconstrained (shattering-dimension) budgets.
    pub c1: f64,
    pub budget_form: BudgetForm,
    /// Shattering-dimension bound used for graph backends.
    pub sdim_graph: f64,
    /// Scale on the `d^2 m^2 log m` Fréchet shattering-dimension bound.
    pub sdim_frechet_scale: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            c0: 8.0,
            c1: 8.0,
            budget_form: BudgetForm::Eps5,
            sdim_graph: 8.0,
            sdim_frechet_scale: 1.0,
        }
    }
}

/// Sample count for one ring. `m` is the raw formula value; the cap at |R|
/// is applied at sampling time so budgets stay comparable across instance
/// sizes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleBudget {
    pub mode: BudgetMode,
    pub m: usize,
    pub k: usize,
    pub z: f64,
    pub eps: f64,
    pub delta: f64,
    pub sdim_bound: f64,
}

#[inline]
fn log2_ceil(x: f64) -> f64 {
    x.log2().ceil().max(1.0)
}

/// Budget formulas (logs base 2, each log factor ceiled and floored at 1):
///
/// * assignment-preserving, eps5:  `ceil(c0 * k/eps^5 * log(k/eps) * log(1/delta))`
/// * assignment-preserving, eps3:  `ceil(c0 * k/eps^3 * log(k/eps)^2 * log(1/delta))`
/// * unconstrained:                `ceil(c1 * eps^-2 * k * sdim * log(1/eps) * log(1/delta))`
pub fn sample_budget(
    params: &ClusteringParams,
    mode: BudgetMode,
    sdim_bound: f64,
    cfg: &SamplingConfig,
) -> SampleBudget {
    let k = params.k as f64;
    let eps = params.eps;
    let log_delta = log2_ceil(1.0 / params.delta);
    let raw = match mode {
        BudgetMode::AssignmentPreserving => {
            let log_ke = log2_ceil(k / eps);
            match cfg.budget_form {
                BudgetForm::Eps5 => cfg.c0 * k / eps.powi(5) * log_ke * log_delta,
                BudgetForm::Eps3WithDim => {
                    cfg.c0 * k / eps.powi(3) * log_ke * log_ke * log_delta
                }
            }
        }
        BudgetMode::Unconstrained => {
            cfg.c1 / (eps * eps) * k * sdim_bound * log2_ceil(1.0 / eps) * log_delta
        }
    };
    SampleBudget {
        mode,
        m: (raw.ceil() as usize).max(1),
        k: params.k,
        z: params.z,
        eps,
        delta: params.delta,
        sdim_bound,
    }
}

/// Uniform sample of `budget.m` points from the ring dataset `R` (every point
/// at distance in `(r, 2r]` from `c`), i.i.d. weight-proportional, each draw
/// reweighted to `w(R)/m`. When the budget reaches |R| the data itself is
/// returned. Total weight is preserved exactly.
pub fn uniform_ring_coreset(
    r: &WeightedPointSet,
    c: PointId,
    radius: f64,
    budget: &SampleBudget,
    seed: u64,
) -> Result<Vec<(PointId, f64)>> {
    let n = r.len();
    let lo = radius * (1.0 - 1e-9);
    let hi = 2.0 * radius * (1.0 + 1e-9);
    for row in 0..n {
        let d = r.dist(row, c)?;
        if d <= lo || d > hi {
            return Err(Error::NotARing {
                index: row,
                dist: d,
                lo: radius,
                hi: 2.0 * radius,
            });
        }
    }
    if budget.m >= n {
        return Ok((0..n).map(|row| (r.point(row), r.weight(row))).collect());
    }
    let m = budget.m;
    let total = r.total_weight();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for row in 0..n {
        acc += r.weight(row);
        cumulative.push(acc);
    }
    let mut rng = rng_for(seed, &[0x72696e67]);
    let mut counts = vec![0usize; n];
    for _ in 0..m {
        let u = rng.random_range(0.0..total);
        let row = cumulative.partition_point(|&cw| cw <= u).min(n - 1);
        counts[row] += 1;
    }
    let unit = total / m as f64;
    let mut out: Vec<(PointId, f64)> = Vec::new();
    let mut emitted = 0.0;
    let picked: Vec<usize> = (0..n).filter(|&row| counts[row] > 0).collect();
    for (pos, &row) in picked.iter().enumerate() {
        let w = if pos + 1 == picked.len() {
            // exact conservation: the final entry absorbs rounding
            total - emitted
        } else {
            counts[row] as f64 * unit
        };
        emitted += w;
        out.push((r.point(row), w));
    }
    Ok(out)
}
