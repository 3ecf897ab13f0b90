//! Per-cluster ring decomposition: dyadic rings around a center, heavy-ring
//! marking, merging of consecutive unmarked rings into bounded-cost groups,
//! and the exact two-point coreset per group. Also the k=1 three-point
//! reduction.

use crate::dataset::{exp2i, powz, ring_index, ClusteringParams, WeightedPointSet};
use crate::error::Result;
use crate::metric::PointId;
use serde::Serialize;
use std::collections::BTreeMap;

/// Decomposition thresholds: `t = ceil(2 + log2(24 z k / eps))` and
/// `err = (eps / 6z)^z * cost_z(P, c) / (k t)`, logs base 2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReductionParams {
    pub t: u32,
    pub err: f64,
    pub z: f64,
    /// `cost_z(P, {c})` the thresholds were derived from.
    pub cost_to_center: f64,
}

impl ReductionParams {
    pub fn from_cost(cost: f64, params: &ClusteringParams) -> Self {
        let t = (2.0 + (24.0 * params.z * params.k as f64 / params.eps).log2()).ceil() as u32;
        let err = powz(params.eps / (6.0 * params.z), params.z) * cost / (params.k as f64 * t as f64);
        Self {
            t,
            err,
            z: params.z,
            cost_to_center: cost,
        }
    }
}

pub fn reduction_params(
    p: &WeightedPointSet,
    c: PointId,
    params: &ClusteringParams,
) -> Result<ReductionParams> {
    let cost = p.cost_z(&[c], params.z)?;
    Ok(ReductionParams::from_cost(cost, params))
}

/// One nonempty dyadic ring: rows of the cluster dataset it holds and their
/// cost to the center.
#[derive(Debug, Clone, Serialize)]
pub struct RingData {
    pub index: i32,
    pub rows: Vec<usize>,
    pub cost: f64,
}

impl RingData {
    /// Inner radius `r_i = 2^(i-1)`; the ring is `ring(c, r_i, 2 r_i)`.
    pub fn radius(&self) -> f64 {
        exp2i(self.index - 1)
    }
}

/// Maximal run of consecutive unmarked rings whose total cost fits under
/// `err`.
#[derive(Debug, Clone, Serialize)]
pub struct Group {
    pub lo: i32,
    pub hi: i32,
    pub rows: Vec<usize>,
    pub cost: f64,
}

/// Closest/furthest points of a group reweighted so that both the group
/// weight and its cost to the center are preserved exactly.
#[derive(Debug, Clone, Serialize)]
pub struct TwoPointCoreset {
    pub close: PointId,
    pub far: PointId,
    pub w_close: f64,
    pub w_far: f64,
}

impl TwoPointCoreset {
    /// Builds the coreset for `rows` of `p` against center `c`. Every point
    /// satisfies `dist^z(x,c) = lambda_x * dist^z(close,c) + (1 - lambda_x) *
    /// dist^z(far,c)` with `lambda_x` in `[0,1]`; ties for close/far go to
    /// the lowest point id. Degenerate groups (single point, or all points
    /// equidistant) collapse onto the close point.
    pub fn build(p: &WeightedPointSet, rows: &[usize], c: PointId, z: f64) -> Result<Self> {
        assert!(!rows.is_empty(), "two-point coreset needs a nonempty group");
        let mut close = rows[0];
        let mut far = rows[0];
        let mut d_close = p.dist(rows[0], c)?;
        let mut d_far = d_close;
        let mut total_w = p.weight(rows[0]);
        for &row in &rows[1..] {
            let d = p.dist(row, c)?;
            total_w += p.weight(row);
            if d < d_close || (d == d_close && p.point(row) < p.point(close)) {
                close = row;
                d_close = d;
            }
            if d > d_far || (d == d_far && p.point(row) < p.point(far)) {
                far = row;
                d_far = d;
            }
        }
        let (cz, fz) = (powz(d_close, z), powz(d_far, z));
        if fz == cz {
            return Ok(Self {
                close: p.point(close),
                far: p.point(far),
                w_close: total_w,
                w_far: 0.0,
            });
        }
        let span = fz - cz;
        let mut w_close = 0.0;
        for &row in rows {
            let dz = powz(p.dist(row, c)?, z);
            let lambda = ((fz - dz) / span).clamp(0.0, 1.0);
            w_close += lambda * p.weight(row);
        }
        // exact complement so w_close + w_far == w(G) bit-for-bit
        let w_far = (total_w - w_close).max(0.0);
        Ok(Self {
            close: p.point(close),
            far: p.point(far),
            w_close,
            w_far,
        })
    }

    pub fn weight(&self) -> f64 {
        self.w_close + self.w_far
    }

    /// Weighted cost of the two points to `c`, for exactness checks.
    pub fn cost_to(&self, p: &WeightedPointSet, c: PointId, z: f64) -> Result<f64> {
        let backend = p.backend();
        Ok(self.w_close * powz(backend.dist(self.close, c)?, z)
            + self.w_far * powz(backend.dist(self.far, c)?, z))
    }
}

/// Output of the reduction on one cluster: the W/Z split. `W` is the marked
/// rings; `Z` is everything else, represented in the coreset by the group
/// two-point coresets plus a single mass at the center.
#[derive(Debug, Clone, Serialize)]
pub struct RingDecomposition {
    pub center: PointId,
    pub rings: Vec<RingData>,
    /// Rows at distance exactly 0 from the center (the i = -inf ring).
    pub center_rows: Vec<usize>,
    pub heavy: Vec<i32>,
    pub groups: Vec<Group>,
    pub two_points: Vec<TwoPointCoreset>,
    /// Singleton coreset point carrying the weight of `center_rows`.
    pub center_mass: Option<(PointId, f64)>,
    pub params: ReductionParams,
}

impl RingDecomposition {
    pub fn marked_rings(&self) -> impl Iterator<Item = &RingData> {
        self.rings.iter().filter(|r| self.heavy.contains(&r.index))
    }

    pub fn is_heavy(&self, index: i32) -> bool {
        self.heavy.binary_search(&index).is_ok()
    }

    /// Rows of W (marked rings).
    pub fn w_rows(&self) -> Vec<usize> {
        self.marked_rings().flat_map(|r| r.rows.clone()).collect()
    }

    /// Rows of Z (unmarked rings plus center rows).
    pub fn z_rows(&self) -> Vec<usize> {
        let mut rows = self.center_rows.clone();
        for r in self.rings.iter().filter(|r| !self.is_heavy(r.index)) {
            rows.extend_from_slice(&r.rows);
        }
        rows
    }

    /// Total weight of the Z-side coreset (center mass plus two-point sets).
    pub fn coreset_weight(&self) -> f64 {
        self.center_mass.map(|(_, w)| w).unwrap_or(0.0)
            + self.two_points.iter().map(TwoPointCoreset::weight).sum::<f64>()
    }
}

/// Algorithm: decompose into dyadic rings, mark rings with cost at least
/// `err`, merge runs of unmarked rings into groups of cost at most `err`
/// (whole-ring greedy), and compress each group to two points. Points
/// coinciding with the center are moved to Z up front as one weighted point.
pub fn decompose(
    p: &WeightedPointSet,
    c: PointId,
    rp: &ReductionParams,
) -> Result<RingDecomposition> {
    let mut ring_map: BTreeMap<i32, RingData> = BTreeMap::new();
    let mut center_rows = Vec::new();
    for row in 0..p.len() {
        let d = p.dist(row, c)?;
        match ring_index(d) {
            None => center_rows.push(row),
            Some(i) => {
                let entry = ring_map.entry(i).or_insert_with(|| RingData {
                    index: i,
                    rows: Vec::new(),
                    cost: 0.0,
                });
                entry.rows.push(row);
                entry.cost += p.weight(row) * powz(d, rp.z);
            }
        }
    }

    // zero-cost rings are never heavy, so the err = 0 degeneracy (all cost
    // at the center) yields an empty W instead of marking everything
    let heavy: Vec<i32> = ring_map
        .values()
        .filter(|r| r.cost >= rp.err && r.cost > 0.0)
        .map(|r| r.index)
        .collect();

    // Buckets: maximal runs of unmarked rings between heavy ones; empty rings
    // do not interrupt a run. Whole-ring greedy inside each bucket.
    let mut groups: Vec<Group> = Vec::new();
    let mut current: Option<Group> = None;
    for ring in ring_map.values() {
        if heavy.binary_search(&ring.index).is_ok() {
            if let Some(g) = current.take() {
                groups.push(g);
            }
            continue;
        }
        match current.as_mut() {
            Some(g) if g.cost + ring.cost <= rp.err => {
                g.hi = ring.index;
                g.rows.extend_from_slice(&ring.rows);
                g.cost += ring.cost;
            }
            Some(_) => {
                groups.push(current.take().unwrap());
                current = Some(Group {
                    lo: ring.index,
                    hi: ring.index,
                    rows: ring.rows.clone(),
                    cost: ring.cost,
                });
            }
            None => {
                current = Some(Group {
                    lo: ring.index,
                    hi: ring.index,
                    rows: ring.rows.clone(),
                    cost: ring.cost,
                });
            }
        }
    }
    if let Some(g) = current.take() {
        groups.push(g);
    }

    let two_points: Vec<TwoPointCoreset> = groups
        .iter()
        .map(|g| TwoPointCoreset::build(p, &g.rows, c, rp.z))
        .collect::<Result<_>>()?;

    let center_mass = if center_rows.is_empty() {
        None
    } else {
        let id = center_rows
            .iter()
            .map(|&r| p.point(r))
            .min()
            .expect("nonempty");
        let w = center_rows.iter().map(|&r| p.weight(r)).sum();
        Some((id, w))
    };

    Ok(RingDecomposition {
        center: c,
        rings: ring_map.into_values().collect(),
        center_rows,
        heavy,
        groups,
        two_points,
        center_mass,
        params: *rp,
    })
}

/// k = 1 reduction: split by the average radius `r = (cost/w)^(1/z)` into a
/// close part (collapsed onto its closest point), a far part (two-point
/// coreset) and a main part kept as O(log(z/eps)) dyadic rings.
#[derive(Debug, Clone, Serialize)]
pub struct K1Reduction {
    pub center: PointId,
    pub rings: Vec<RingData>,
    pub close_point: Option<(PointId, f64)>,
    pub far_two_point: Option<TwoPointCoreset>,
    pub avg_radius: f64,
    pub close_threshold: f64,
    pub far_threshold: f64,
}

impl K1Reduction {
    /// Number of coreset points emitted for Z; always at most 3.
    pub fn coreset_len(&self) -> usize {
        self.close_point.iter().len()
            + self.far_two_point.as_ref().map_or(0, |tp| {
                if tp.w_far > 0.0 && tp.far != tp.close {
                    2
                } else {
                    1
                }
            })
    }
}

pub fn reduce_k1(
    p: &WeightedPointSet,
    c: PointId,
    params: &ClusteringParams,
) -> Result<K1Reduction> {
    let z = params.z;
    let rbar = p.avg_radius(c, z)?;
    if rbar == 0.0 {
        // every point coincides with the center
        let id = p.points().iter().copied().min().expect("nonempty");
        return Ok(K1Reduction {
            center: c,
            rings: Vec::new(),
            close_point: Some((id, p.total_weight())),
            far_two_point: None,
            avg_radius: 0.0,
            close_threshold: 0.0,
            far_threshold: 0.0,
        });
    }
    let close_threshold = params.eps / (6.0 * z) * rbar;
    let far_threshold = 120.0 * z / (params.eps * params.eps) * rbar;

    let mut close_rows = Vec::new();
    let mut far_rows = Vec::new();
    let mut ring_map: BTreeMap<i32, RingData> = BTreeMap::new();
    for row in 0..p.len() {
        let d = p.dist(row, c)?;
        if d < close_threshold {
            close_rows.push(row);
        } else if d > far_threshold {
            far_rows.push(row);
        } else {
            let i = ring_index(d).expect("main part has positive distance");
            let entry = ring_map.entry(i).or_insert_with(|| RingData {
                index: i,
                rows: Vec::new(),
                cost: 0.0,
            });
            entry.rows.push(row);
            entry.cost += p.weight(row) * powz(d, z);
        }
    }

    let close_point = if close_rows.is_empty() {
        None
    } else {
        let mut best = close_rows[0];
        let mut best_d = p.dist(best, c)?;
        for &row in &close_rows[1..] {
            let d = p.dist(row, c)?;
            if d < best_d || (d == best_d && p.point(row) < p.point(best)) {
                best = row;
                best_d = d;
            }
        }
        let w: f64 = close_rows.iter().map(|&r| p.weight(r)).sum();
        Some((p.point(best), w))
    };
    let far_two_point = if far_rows.is_empty() {
        None
    } else {
        Some(TwoPointCoreset::build(p, &far_rows, c, z)?)
    };

    Ok(K1Reduction {
        center: c,
        rings: ring_map.into_values().collect(),
        close_point,
        far_two_point,
        avg_radius: rbar,
        close_threshold,
        far_threshold,
    })
}

/// Realized structural counts checked against the concrete bounds implied by
/// the thresholds.
#[derive(Debug, Clone, Serialize)]
pub struct StructuralReport {
    pub heavy_count: usize,
    pub bucket_count: usize,
    pub group_count: usize,
    pub coreset_points: usize,
    /// `cost / err`
    pub heavy_bound: f64,
    /// `2 cost / err + heavy + 1`
    pub group_bound: f64,
    pub within_bounds: bool,
}

pub fn count_bounds(dec: &RingDecomposition) -> StructuralReport {
    let rp = &dec.params;
    let heavy_count = dec.heavy.len();
    // count maximal unmarked runs
    let mut bucket_count = 0usize;
    let mut in_bucket = false;
    for ring in &dec.rings {
        if dec.is_heavy(ring.index) {
            in_bucket = false;
        } else if !in_bucket {
            in_bucket = true;
            bucket_count += 1;
        }
    }
    let group_count = dec.groups.len();
    let coreset_points = dec.center_mass.iter().len()
        + dec
            .two_points
            .iter()
            .map(|tp| if tp.w_far > 0.0 && tp.far != tp.close { 2 } else { 1 })
            .sum::<usize>();
    let (heavy_bound, group_bound) = if rp.err > 0.0 {
        let hb = rp.cost_to_center / rp.err;
        (hb, 2.0 * hb + heavy_count as f64 + 1.0)
    } else {
        (0.0, 1.0)
    };
    let within_bounds = (heavy_count as f64) <= heavy_bound + 1e-9
        && (group_count as f64) <= group_bound + 1e-9;
    StructuralReport {
        heavy_count,
        bucket_count,
        group_count,
        coreset_points,
        heavy_bound,
        group_bound,
        within_bounds,
    }
}
