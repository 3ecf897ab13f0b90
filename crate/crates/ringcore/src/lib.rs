//! Small coresets for (k,z)-clustering with and without assignment
//! constraints (capacitated and fair clustering), built by reduction to ring
//! datasets where plain uniform sampling suffices.
//!
//! The pipeline: a bicriteria approximation partitions the data into
//! clusters; each cluster is decomposed into dyadic rings around its center;
//! rings carrying real cost are kept and uniform-sampled, the rest are merged
//! into bounded-cost groups and compressed to exact two-point coresets. The
//! composition turns the per-cluster additive guarantees into a relative-
//! error coreset. Constrained costs are evaluated exactly through a
//! min-cost transportation solve, and a brute-force oracle layer referees
//! everything that is checkable at small scale.
//!
//! Metric backends: Euclidean coordinates, graph shortest paths, p-Wasserstein
//! over fixed-size tuples (barycenter setting), and discrete Fréchet curves.
//!
//! ```
//! use ringcore::prelude::*;
//! use std::sync::Arc;
//!
//! let coords = ringcore::synth::gaussian_mixture(500, 3, 2, 10.0, 1.0, 7);
//! let space = EuclideanSpace::from_rows(2, &coords).unwrap();
//! let data = WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(space))).unwrap();
//! let params = ClusteringParams::new(3, 1.0, 0.2, 0.1, 42).unwrap();
//! let coreset = build_coreset(&data, &params, CoresetMode::Vanilla, &PipelineConfig::default()).unwrap();
//! assert!(coreset.size <= data.len());
//! assert!((coreset.total_weight() - data.total_weight()).abs() < 1e-9);
//! ```

pub mod bicriteria;
pub mod composer;
pub mod dataset;
pub mod error;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod rings;
pub mod rng;
pub mod sampling;
pub mod synth;
pub mod transport;

pub mod prelude {
    pub use crate::bicriteria::{bicriteria_approx, cluster_partition, BicriteriaConfig, BicriteriaResult};
    pub use crate::composer::{
        build_barycenter_coreset, build_coreset, build_fair_coreset, pick_barycenter_center,
        CoresetMode, CoresetResult, PipelineConfig, Provenance,
    };
    pub use crate::dataset::{ring_index, ClusteringParams, WeightedPointSet};
    pub use crate::error::{Error, Result};
    pub use crate::metric::{
        CurveSpace, EuclideanSpace, GraphMetric, MetricBackend, PointId, TupleSpace,
    };
    pub use crate::oracle::{eval_harness, CenterGen, EvalReport, HarnessConfig};
    pub use crate::rings::{decompose, reduce_k1, reduction_params, RingDecomposition};
    pub use crate::sampling::{
        sample_budget, uniform_ring_coreset, BudgetForm, BudgetMode, SampleBudget, SamplingConfig,
    };
    pub use crate::transport::{solve_transport, AssignmentConstraint, TransportPlan};
}
