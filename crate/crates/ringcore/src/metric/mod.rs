//! Metric backends: Euclidean coordinates, graph shortest paths, p-Wasserstein
//! tuples and discrete Fréchet curves, all behind one immutable point store.
//!
//! Points are addressed by [`PointId`] handles into a backend. Backends never
//! mutate after construction; "adding" query points produces a new backend
//! whose existing handles stay valid.

mod euclidean;
mod frechet;
mod graph;
mod lap;
mod wasserstein;

pub use euclidean::EuclideanSpace;
pub use frechet::CurveSpace;
pub use graph::GraphMetric;
pub use lap::min_cost_assignment;
pub use wasserstein::TupleSpace;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Handle of a point inside a [`MetricBackend`] store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A distance provider over an immutable point store.
#[derive(Debug, Clone)]
pub enum MetricBackend {
    Euclidean(EuclideanSpace),
    Graph(GraphMetric),
    Wasserstein(TupleSpace),
    Frechet(CurveSpace),
}

impl MetricBackend {
    /// Number of points in the store.
    pub fn len(&self) -> usize {
        match self {
            MetricBackend::Euclidean(s) => s.len(),
            MetricBackend::Graph(g) => g.len(),
            MetricBackend::Wasserstein(t) => t.len(),
            MetricBackend::Frechet(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MetricBackend::Euclidean(_) => "euclidean",
            MetricBackend::Graph(_) => "graph",
            MetricBackend::Wasserstein(_) => "wasserstein",
            MetricBackend::Frechet(_) => "frechet",
        }
    }

    fn check(&self, p: PointId) -> Result<usize> {
        if p.0 < self.len() {
            Ok(p.0)
        } else {
            Err(Error::InvalidHandle {
                handle: p.0,
                len: self.len(),
            })
        }
    }

    /// Metric distance between two stored points.
    pub fn dist(&self, x: PointId, y: PointId) -> Result<f64> {
        let (a, b) = (self.check(x)?, self.check(y)?);
        match self {
            MetricBackend::Euclidean(s) => Ok(s.dist(a, b)),
            MetricBackend::Graph(g) => g.dist(a, b),
            MetricBackend::Wasserstein(t) => Ok(t.dist(a, b)),
            MetricBackend::Frechet(c) => Ok(c.dist(a, b)),
        }
    }

    /// Extends a Euclidean store with query points, returning the new backend
    /// and the handles of the appended points. Existing handles stay valid.
    pub fn append_euclidean(&self, pts: &[Vec<f64>]) -> Result<(MetricBackend, Vec<PointId>)> {
        match self {
            MetricBackend::Euclidean(s) => {
                let (space, ids) = s.append(pts)?;
                Ok((MetricBackend::Euclidean(space), ids))
            }
            _ => Err(Error::BackendMismatch("euclidean")),
        }
    }

    /// Extends a Wasserstein store with query tuples (each an `l`-list of
    /// `d`-vectors).
    pub fn append_tuples(&self, tuples: &[Vec<Vec<f64>>]) -> Result<(MetricBackend, Vec<PointId>)> {
        match self {
            MetricBackend::Wasserstein(t) => {
                let (space, ids) = t.append(tuples)?;
                Ok((MetricBackend::Wasserstein(space), ids))
            }
            _ => Err(Error::BackendMismatch("wasserstein")),
        }
    }

    /// Euclidean coordinates of a point, when the backend has them.
    pub fn coords(&self, p: PointId) -> Option<&[f64]> {
        match self {
            MetricBackend::Euclidean(s) if p.0 < s.len() => Some(s.point(p.0)),
            _ => None,
        }
    }

    /// Default shattering-dimension bound of the ball range space, used to
    /// budget unconstrained ring samples. Graph and Fréchet scales are
    /// configuration, not derived quantities.
    pub fn default_sdim(&self, graph_sdim: f64, frechet_scale: f64) -> f64 {
        match self {
            MetricBackend::Euclidean(s) => (s.dim() + 1) as f64,
            MetricBackend::Graph(_) => graph_sdim,
            // Base space is Euclidean(d): (sdim + 1) * l = (d + 2) * l.
            MetricBackend::Wasserstein(t) => ((t.dim() + 2) * t.tuple_len()) as f64,
            MetricBackend::Frechet(c) => {
                let d = c.dim() as f64;
                let m = c.max_complexity().max(2) as f64;
                frechet_scale * d * d * m * m * m.log2()
            }
        }
    }
}
