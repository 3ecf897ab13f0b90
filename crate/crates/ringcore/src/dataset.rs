//! Weighted point sets over a metric backend and the (k,z)-clustering cost.

use crate::error::{Error, Result};
use crate::metric::{MetricBackend, PointId};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Instance parameters: k centers, power z (1 = median, 2 = means), target
/// relative error eps, failure probability delta, and the RNG seed all
/// randomness flows from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClusteringParams {
    pub k: usize,
    pub z: f64,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
}

impl ClusteringParams {
    pub fn new(k: usize, z: f64, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        let p = Self {
            k,
            z,
            eps,
            delta,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.z.is_nan() || self.z < 1.0 {
            return Err(Error::Config(format!("z = {} must be >= 1", self.z)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::Config(format!("eps = {} must lie in (0,1)", self.eps)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!(
                "delta = {} must lie in (0,1)",
                self.delta
            )));
        }
        Ok(())
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }
}

/// `d^z` with fast paths for the common powers.
#[inline]
pub fn powz(d: f64, z: f64) -> f64 {
    if z == 1.0 {
        d
    } else if z == 2.0 {
        d * d
    } else {
        d.powf(z)
    }
}

/// Dataset with nonnegative weights; points are handles into a shared
/// immutable backend. Group labels, when present, cover every point
/// (possibly with the empty set).
#[derive(Debug, Clone)]
pub struct WeightedPointSet {
    backend: Arc<MetricBackend>,
    points: Vec<PointId>,
    weights: Vec<f64>,
    labels: Option<Vec<Vec<String>>>,
}

impl WeightedPointSet {
    pub fn new(
        backend: Arc<MetricBackend>,
        points: Vec<PointId>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Config(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        let mut total = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::NegativeWeight { index: i, weight: w });
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::ZeroWeight);
        }
        for &p in &points {
            if p.0 >= backend.len() {
                return Err(Error::InvalidHandle {
                    handle: p.0,
                    len: backend.len(),
                });
            }
        }
        Ok(Self {
            backend,
            points,
            weights,
            labels: None,
        })
    }

    /// Unit-weight dataset over the backend's full store.
    pub fn unit(backend: Arc<MetricBackend>) -> Result<Self> {
        let n = backend.len();
        Self::new(backend, (0..n).map(PointId).collect(), vec![1.0; n])
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::Config(format!(
                "{} label sets for {} points",
                labels.len(),
                self.points.len()
            )));
        }
        let labels = labels
            .into_iter()
            .map(|mut l| {
                l.sort();
                l.dedup();
                l
            })
            .collect();
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn backend(&self) -> &Arc<MetricBackend> {
        &self.backend
    }

    /// Rebinds the dataset to an extended backend. Valid because appends keep
    /// existing handles stable.
    pub fn with_backend(&self, backend: Arc<MetricBackend>) -> Self {
        Self {
            backend,
            points: self.points.clone(),
            weights: self.weights.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> PointId {
        self.points[i]
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    #[inline]
    pub fn dist(&self, i: usize, c: PointId) -> Result<f64> {
        self.backend.dist(self.points[i], c)
    }

    /// Nearest center and its distance; ties broken by lowest center index.
    pub fn nearest_center(&self, i: usize, centers: &[PointId]) -> Result<(usize, f64)> {
        let mut best = (0usize, f64::INFINITY);
        for (ci, &c) in centers.iter().enumerate() {
            let d = self.dist(i, c)?;
            if d < best.1 {
                best = (ci, d);
            }
        }
        Ok(best)
    }

    /// `cost_z(P, C) = sum_x w(x) * dist(x, C)^z`.
    pub fn cost_z(&self, centers: &[PointId], z: f64) -> Result<f64> {
        if centers.is_empty() {
            return Err(Error::EmptyCenters);
        }
        let mut total = 0.0;
        for i in 0..self.len() {
            let (_, d) = self.nearest_center(i, centers)?;
            total += self.weights[i] * powz(d, z);
        }
        Ok(total)
    }

    /// `(cost_z(P, {c}) / w(P))^(1/z)`; callers must branch on the all-at-c
    /// degenerate case where this is 0.
    pub fn avg_radius(&self, c: PointId, z: f64) -> Result<f64> {
        let w = self.total_weight();
        if w <= 0.0 {
            return Err(Error::ZeroWeight);
        }
        let cost = self.cost_z(&[c], z)?;
        Ok((cost / w).powf(1.0 / z))
    }

    /// Sub-dataset sharing the backend; `rows` index into this dataset.
    pub fn subset(&self, rows: &[usize]) -> Self {
        Self {
            backend: self.backend.clone(),
            points: rows.iter().map(|&r| self.points[r]).collect(),
            weights: rows.iter().map(|&r| self.weights[r]).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| rows.iter().map(|&r| l[r].clone()).collect()),
        }
    }
}

/// Dyadic ring index: the unique `i` with `2^(i-1) < d <= 2^i`, or `None`
/// for `d = 0` (the point sits on the center).
///
/// Points within `1e-12 * 2^(i-1)` above the lower boundary are snapped down
/// into the lower ring so boundary noise indexes deterministically.
pub fn ring_index(d: f64) -> Option<i32> {
    assert!(d >= 0.0 && d.is_finite(), "ring_index needs finite d >= 0, got {d}");
    if d == 0.0 {
        return None;
    }
    let mut i = d.log2().ceil() as i32;
    while exp2i(i - 1) >= d {
        i -= 1;
    }
    while d > exp2i(i) {
        i += 1;
    }
    let lower = exp2i(i - 1);
    if d - lower <= 1e-12 * lower {
        i -= 1;
    }
    Some(i)
}

/// `2^i` for ring indices (exact for the f64 exponent range).
#[inline]
pub fn exp2i(i: i32) -> f64 {
    (i as f64).exp2()
}
