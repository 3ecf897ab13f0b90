//! End-to-end coreset pipelines: additive-to-relative composition over a
//! bicriteria partition, the fair/capacitated builder, and the Wasserstein
//! barycenter builder.

use crate::bicriteria::{bicriteria_approx, cluster_partition, default_alpha, BicriteriaConfig};
use crate::dataset::{ClusteringParams, WeightedPointSet};
use crate::error::{Error, Result};
use crate::metric::{MetricBackend, PointId};
use crate::rings::{decompose, reduce_k1, reduction_params, RingData, TwoPointCoreset};
use crate::rng::{rng_for, stream_seed};
use crate::sampling::{sample_budget, uniform_ring_coreset, BudgetMode, SampleBudget, SamplingConfig};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoresetMode {
    Vanilla,
    AssignmentPreserving,
}

/// Which pipeline stage a coreset point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    TwoPoint,
    RingSample,
    CenterMass,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub sampling: SamplingConfig,
    pub bicriteria: BicriteriaConfig,
}

/// Realized size bookkeeping. `ring_budget` is the raw per-ring formula value
/// (independent of the instance size); `bound` is the accounting cap
/// `center_mass + 2 * groups + 3 * [k=1 path] + sum_rings min(budget, |R|)`.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SizeAccounting {
    pub clusters: usize,
    pub marked_rings: usize,
    pub groups: usize,
    pub center_mass_points: usize,
    pub k1_path: bool,
    pub ring_budget: usize,
    pub ring_samples: usize,
    pub capped_rings: usize,
    pub bound: usize,
    pub size: usize,
}

/// A reweighted subset of the input handles plus build metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoresetResult {
    pub mode: CoresetMode,
    pub params: ClusteringParams,
    pub points: Vec<PointId>,
    pub weights: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub alpha_used: Option<f64>,
    pub size: usize,
    #[serde(rename = "size_accounting")]
    pub accounting: SizeAccounting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

impl CoresetResult {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Materializes the coreset as a dataset over `backend`.
    pub fn to_point_set(&self, backend: Arc<MetricBackend>) -> Result<WeightedPointSet> {
        WeightedPointSet::new(backend, self.points.clone(), self.weights.clone())
    }
}

struct ClusterOutput {
    entries: Vec<(PointId, f64, Provenance)>,
    marked_rings: usize,
    groups: usize,
    center_mass: usize,
    ring_samples: usize,
    capped_rings: usize,
    ring_cap_sum: usize,
}

fn push_two_point(tp: &TwoPointCoreset, out: &mut Vec<(PointId, f64, Provenance)>) {
    if tp.w_close > 0.0 {
        out.push((tp.close, tp.w_close, Provenance::TwoPoint));
    }
    if tp.w_far > 0.0 && tp.far != tp.close {
        out.push((tp.far, tp.w_far, Provenance::TwoPoint));
    }
}

fn sample_rings(
    cluster: &WeightedPointSet,
    center: PointId,
    rings: &[&RingData],
    budget: &SampleBudget,
    seed: u64,
    cluster_idx: usize,
    out: &mut ClusterOutput,
) -> Result<()> {
    for ring in rings {
        let sub = cluster.subset(&ring.rows);
        let ring_seed = stream_seed(seed, &[cluster_idx as u64, ring.index as i64 as u64]);
        let sample = uniform_ring_coreset(&sub, center, ring.radius(), budget, ring_seed)?;
        out.ring_samples += sample.len();
        if budget.m < ring.rows.len() {
            out.ring_cap_sum += budget.m;
        } else {
            out.ring_cap_sum += ring.rows.len();
            out.capped_rings += 1;
        }
        out.entries
            .extend(sample.into_iter().map(|(p, w)| (p, w, Provenance::RingSample)));
    }
    Ok(())
}

/// Bicriteria centers -> nearest-center partition -> per-cluster reduction ->
/// uniform samples on every marked ring. The working error inside the
/// pipeline is `eps / (alpha + 1)`, matching the composition's rescaling.
pub fn build_coreset(
    p: &WeightedPointSet,
    params: &ClusteringParams,
    mode: CoresetMode,
    cfg: &PipelineConfig,
) -> Result<CoresetResult> {
    params.validate()?;
    let alpha = cfg
        .bicriteria
        .alpha_override
        .unwrap_or_else(|| default_alpha(params.z));
    let params_w = params.with_eps(params.eps / (alpha + 1.0));

    let bic = bicriteria_approx(p, params, &cfg.bicriteria)?;
    let clusters = cluster_partition(p, &bic);

    let budget_mode = match mode {
        CoresetMode::Vanilla => BudgetMode::Unconstrained,
        CoresetMode::AssignmentPreserving => BudgetMode::AssignmentPreserving,
    };
    let sdim = p
        .backend()
        .default_sdim(cfg.sampling.sdim_graph, cfg.sampling.sdim_frechet_scale);
    let budget = sample_budget(&params_w, budget_mode, sdim, &cfg.sampling);

    let outputs: Vec<Result<ClusterOutput>> = clusters
        .par_iter()
        .enumerate()
        .map(|(ci, (cluster, center))| {
            let mut out = ClusterOutput {
                entries: Vec::new(),
                marked_rings: 0,
                groups: 0,
                center_mass: 0,
                ring_samples: 0,
                capped_rings: 0,
                ring_cap_sum: 0,
            };
            if params.k == 1 {
                let red = reduce_k1(cluster, *center, &params_w)?;
                if let Some((id, w)) = red.close_point {
                    if w > 0.0 {
                        out.center_mass += 1;
                        out.entries.push((id, w, Provenance::CenterMass));
                    }
                }
                if let Some(tp) = &red.far_two_point {
                    out.groups += 1;
                    push_two_point(tp, &mut out.entries);
                }
                out.marked_rings = red.rings.len();
                let refs: Vec<&RingData> = red.rings.iter().collect();
                sample_rings(cluster, *center, &refs, &budget, params.seed, ci, &mut out)?;
            } else {
                let rp = reduction_params(cluster, *center, &params_w)?;
                let dec = decompose(cluster, *center, &rp)?;
                if let Some((id, w)) = dec.center_mass {
                    if w > 0.0 {
                        out.center_mass += 1;
                        out.entries.push((id, w, Provenance::CenterMass));
                    }
                }
                out.groups = dec.groups.len();
                for tp in &dec.two_points {
                    push_two_point(tp, &mut out.entries);
                }
                let marked: Vec<&RingData> = dec.marked_rings().collect();
                out.marked_rings = marked.len();
                sample_rings(cluster, *center, &marked, &budget, params.seed, ci, &mut out)?;
            }
            Ok(out)
        })
        .collect();

    let mut entries: Vec<(PointId, f64, Provenance)> = Vec::new();
    let mut acc = SizeAccounting {
        clusters: clusters.len(),
        k1_path: params.k == 1,
        ring_budget: budget.m,
        ..SizeAccounting::default()
    };
    let mut ring_cap_sum = 0usize;
    for out in outputs {
        let out = out?;
        entries.extend(out.entries);
        acc.marked_rings += out.marked_rings;
        acc.groups += out.groups;
        acc.center_mass_points += out.center_mass;
        acc.ring_samples += out.ring_samples;
        acc.capped_rings += out.capped_rings;
        ring_cap_sum += out.ring_cap_sum;
    }
    entries.sort_by_key(|e| e.0);
    acc.size = entries.len();
    acc.bound = acc.center_mass_points
        + 2 * acc.groups
        + if acc.k1_path { 3 } else { 0 }
        + ring_cap_sum;
    assert!(
        acc.size <= acc.bound,
        "size accounting violated: {} > {}",
        acc.size,
        acc.bound
    );

    let labels = p.labels().map(|all| {
        let index: BTreeMap<PointId, usize> =
            p.points().iter().copied().zip(0..).collect();
        entries
            .iter()
            .map(|(id, _, _)| all[index[id]].clone())
            .collect()
    });
    Ok(CoresetResult {
        mode,
        params: *params,
        points: entries.iter().map(|e| e.0).collect(),
        weights: entries.iter().map(|e| e.1).collect(),
        provenance: entries.iter().map(|e| e.2).collect(),
        alpha_used: Some(alpha),
        size: entries.len(),
        accounting: acc,
        labels,
    })
}

/// Disjoint split of a labelled dataset by group-membership signature.
#[derive(Debug)]
pub struct FairPartition {
    /// signature -> rows, ordered by signature
    pub parts: BTreeMap<Vec<String>, Vec<usize>>,
}

impl FairPartition {
    pub fn of(p: &WeightedPointSet) -> Result<Self> {
        let labels = p.labels().ok_or(Error::MissingLabels)?;
        let mut parts: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
        for (row, sig) in labels.iter().enumerate() {
            parts.entry(sig.clone()).or_default().push(row);
        }
        Ok(Self { parts })
    }

    pub fn delta(&self) -> usize {
        self.parts.len()
    }
}

/// Fair reduction: partition by signature, build an assignment-preserving
/// coreset per part with the same parameters, and take the union. Per-part
/// total weights are preserved exactly; a single-signature input degenerates
/// to the plain builder bit-for-bit.
pub fn build_fair_coreset(
    p: &WeightedPointSet,
    params: &ClusteringParams,
    cfg: &PipelineConfig,
) -> Result<CoresetResult> {
    let partition = FairPartition::of(p)?;
    let parts: Vec<&Vec<usize>> = partition.parts.values().collect();
    let results: Vec<Result<CoresetResult>> = parts
        .par_iter()
        .map(|rows| build_coreset(&p.subset(rows), params, CoresetMode::AssignmentPreserving, cfg))
        .collect();

    let mut entries: Vec<(PointId, f64, Provenance)> = Vec::new();
    let mut acc = SizeAccounting::default();
    let mut labels: Vec<(PointId, Vec<String>)> = Vec::new();
    for res in results {
        let res = res?;
        acc.clusters += res.accounting.clusters;
        acc.marked_rings += res.accounting.marked_rings;
        acc.groups += res.accounting.groups;
        acc.center_mass_points += res.accounting.center_mass_points;
        acc.ring_samples += res.accounting.ring_samples;
        acc.capped_rings += res.accounting.capped_rings;
        acc.bound += res.accounting.bound;
        acc.k1_path = res.accounting.k1_path;
        acc.ring_budget = res.accounting.ring_budget;
        if let Some(part_labels) = &res.labels {
            labels.extend(res.points.iter().copied().zip(part_labels.iter().cloned()));
        }
        entries.extend(
            res.points
                .into_iter()
                .zip(res.weights)
                .zip(res.provenance)
                .map(|((id, w), pv)| (id, w, pv)),
        );
    }
    entries.sort_by_key(|e| e.0);
    labels.sort_by_key(|e| e.0);
    acc.size = entries.len();

    Ok(CoresetResult {
        mode: CoresetMode::AssignmentPreserving,
        params: *params,
        points: entries.iter().map(|e| e.0).collect(),
        weights: entries.iter().map(|e| e.1).collect(),
        provenance: entries.iter().map(|e| e.2).collect(),
        alpha_used: Some(
            cfg.bicriteria
                .alpha_override
                .unwrap_or_else(|| default_alpha(params.z)),
        ),
        size: entries.len(),
        accounting: acc,
        labels: if labels.is_empty() {
            None
        } else {
            Some(labels.into_iter().map(|(_, l)| l).collect())
        },
    })
}

/// Approximate 1-median under the backend metric: the cheapest of
/// `3 * ceil(log2(1/delta))` weight-proportional draws. Deterministic in the
/// seed; this is the center handed to the k=1 reduction.
pub fn pick_barycenter_center(
    p: &WeightedPointSet,
    params: &ClusteringParams,
) -> Result<PointId> {
    let candidates = (3.0 * (1.0 / params.delta).log2().ceil()).max(1.0) as usize;
    let mut rng = rng_for(params.seed, &[0x62617279]);
    let total = p.total_weight();
    let mut cumulative = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for row in 0..p.len() {
        acc += p.weight(row);
        cumulative.push(acc);
    }
    let mut center = p.point(0);
    let mut center_cost = f64::INFINITY;
    for _ in 0..candidates {
        let u = rng.random_range(0.0..total);
        let row = cumulative.partition_point(|&cw| cw <= u).min(p.len() - 1);
        let cand = p.point(row);
        let cost = p.cost_z(&[cand], 1.0)?;
        if cost < center_cost {
            center_cost = cost;
            center = cand;
        }
    }
    Ok(center)
}

/// Wasserstein barycenter coreset (k = 1 median over l-tuples): pick an
/// approximate 1-median by the best of a few weight-proportional draws, run
/// the three-point reduction, and uniform-sample the main rings with the
/// tuple shattering-dimension bound `(d + 2) * l`.
pub fn build_barycenter_coreset(
    p: &WeightedPointSet,
    params: &ClusteringParams,
    cfg: &PipelineConfig,
) -> Result<CoresetResult> {
    params.validate()?;
    let MetricBackend::Wasserstein(space) = p.backend().as_ref() else {
        return Err(Error::BackendMismatch("wasserstein"));
    };
    if params.k != 1 {
        return Err(Error::Config("barycenter pipeline requires k = 1".into()));
    }
    if params.z != 1.0 {
        return Err(Error::Config(
            "barycenter objective is a 1-median: z must be 1".into(),
        ));
    }
    let sdim = ((space.dim() + 2) * space.tuple_len()) as f64;
    let center = pick_barycenter_center(p, params)?;
    let red = reduce_k1(p, center, params)?;
    let budget = sample_budget(params, BudgetMode::Unconstrained, sdim, &cfg.sampling);
    let mut out = ClusterOutput {
        entries: Vec::new(),
        marked_rings: red.rings.len(),
        groups: 0,
        center_mass: 0,
        ring_samples: 0,
        capped_rings: 0,
        ring_cap_sum: 0,
    };
    if let Some((id, w)) = red.close_point {
        if w > 0.0 {
            out.center_mass += 1;
            out.entries.push((id, w, Provenance::CenterMass));
        }
    }
    if let Some(tp) = &red.far_two_point {
        out.groups += 1;
        push_two_point(tp, &mut out.entries);
    }
    let refs: Vec<&RingData> = red.rings.iter().collect();
    sample_rings(p, center, &refs, &budget, params.seed, 0, &mut out)?;

    let mut entries = out.entries;
    entries.sort_by_key(|e| e.0);
    let acc = SizeAccounting {
        clusters: 1,
        marked_rings: out.marked_rings,
        groups: out.groups,
        center_mass_points: out.center_mass,
        k1_path: true,
        ring_budget: budget.m,
        ring_samples: out.ring_samples,
        capped_rings: out.capped_rings,
        bound: out.center_mass + 2 * out.groups + 3 + out.ring_cap_sum,
        size: entries.len(),
    };
    assert!(acc.size <= acc.bound);
    Ok(CoresetResult {
        mode: CoresetMode::Vanilla,
        params: *params,
        points: entries.iter().map(|e| e.0).collect(),
        weights: entries.iter().map(|e| e.1).collect(),
        provenance: entries.iter().map(|e| e.2).collect(),
        alpha_used: None,
        size: entries.len(),
        accounting: acc,
        labels: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::EuclideanSpace;

    fn plane(rows: &[Vec<f64>]) -> WeightedPointSet {
        WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(
            EuclideanSpace::from_rows(2, rows).unwrap(),
        )))
        .unwrap()
    }

    fn small_cfg() -> PipelineConfig {
        PipelineConfig::default()
    }

    #[test]
    fn k_distinct_points_reproduce_exactly() {
        let rows = vec![vec![0.0, 0.0], vec![5.0, 0.0], vec![0.0, 7.0]];
        let p = plane(&rows);
        let params = ClusteringParams::new(3, 1.0, 0.2, 0.1, 1).unwrap();
        let res = build_coreset(&p, &params, CoresetMode::Vanilla, &small_cfg()).unwrap();
        // cost error 0 for any centers: the coreset must carry all the mass
        // at the original locations
        assert_eq!(res.total_weight(), 3.0);
        let s = res.to_point_set(p.backend().clone()).unwrap();
        for c in 0..3 {
            let centers = [PointId(c)];
            assert!(
                (s.cost_z(&centers, 1.0).unwrap() - p.cost_z(&centers, 1.0).unwrap()).abs()
                    < 1e-9
            );
        }
    }

    #[test]
    fn weight_conserved_in_both_modes() {
        use rand::prelude::*;
        let mut rng = rng_for(3, &[9]);
        let rows: Vec<Vec<f64>> = (0..300)
            .map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])
            .collect();
        let p = plane(&rows);
        let params = ClusteringParams::new(3, 1.0, 0.3, 0.1, 7).unwrap();
        for mode in [CoresetMode::Vanilla, CoresetMode::AssignmentPreserving] {
            let res = build_coreset(&p, &params, mode, &small_cfg()).unwrap();
            assert!(
                (res.total_weight() - p.total_weight()).abs() <= 1e-9,
                "{mode:?}"
            );
            assert_eq!(res.size, res.points.len());
            assert!(res.size <= res.accounting.bound);
            // subset property: every coreset point is an input handle
            for id in &res.points {
                assert!(p.points().contains(id));
            }
        }
    }

    #[test]
    fn deterministic_output() {
        use rand::prelude::*;
        let mut rng = rng_for(4, &[2]);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])
            .collect();
        let p = plane(&rows);
        let params = ClusteringParams::new(2, 2.0, 0.25, 0.1, 11).unwrap();
        let a = build_coreset(&p, &params, CoresetMode::Vanilla, &small_cfg()).unwrap();
        let b = build_coreset(&p, &params, CoresetMode::Vanilla, &small_cfg()).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.weights, b.weights);
    }

    #[test]
    fn fair_single_group_matches_plain_build() {
        use rand::prelude::*;
        let mut rng = rng_for(8, &[4]);
        let rows: Vec<Vec<f64>> = (0..150)
            .map(|_| vec![rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)])
            .collect();
        let labels = vec![vec!["all".to_string()]; rows.len()];
        let p = plane(&rows).with_labels(labels).unwrap();
        let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 5).unwrap();
        let fair = build_fair_coreset(&p, &params, &small_cfg()).unwrap();
        let plain =
            build_coreset(&p, &params, CoresetMode::AssignmentPreserving, &small_cfg()).unwrap();
        assert_eq!(
            serde_json::to_string(&fair).unwrap(),
            serde_json::to_string(&plain).unwrap()
        );
    }

    #[test]
    fn fair_parts_conserve_weights() {
        use rand::prelude::*;
        let mut rng = rng_for(12, &[6]);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| vec![rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)])
            .collect();
        let labels: Vec<Vec<String>> = (0..rows.len())
            .map(|i| {
                if i % 2 == 0 {
                    vec!["a".into()]
                } else {
                    vec!["b".into()]
                }
            })
            .collect();
        let p = plane(&rows).with_labels(labels).unwrap();
        let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 5).unwrap();
        let fair = build_fair_coreset(&p, &params, &small_cfg()).unwrap();
        let got_labels = fair.labels.as_ref().expect("labels carried");
        let mut wa = 0.0;
        let mut wb = 0.0;
        for (w, l) in fair.weights.iter().zip(got_labels) {
            if l[0] == "a" {
                wa += w;
            } else {
                wb += w;
            }
        }
        assert!((wa - 100.0).abs() <= 1e-9);
        assert!((wb - 100.0).abs() <= 1e-9);
    }

    #[test]
    fn fair_without_labels_is_rejected() {
        let p = plane(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
        let params = ClusteringParams::new(1, 1.0, 0.3, 0.1, 5).unwrap();
        assert!(matches!(
            build_fair_coreset(&p, &params, &small_cfg()),
            Err(Error::MissingLabels)
        ));
    }

    #[test]
    fn barycenter_identical_tuples_collapse() {
        let tuple = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![2.0, 2.0]];
        let tuples: Vec<_> = std::iter::repeat_n(tuple, 40).collect();
        let space = crate::metric::TupleSpace::from_tuples(3, 2, 1.0, &tuples).unwrap();
        let p = WeightedPointSet::unit(Arc::new(MetricBackend::Wasserstein(space))).unwrap();
        let params = ClusteringParams::new(1, 1.0, 0.25, 0.1, 3).unwrap();
        let res = build_barycenter_coreset(&p, &params, &small_cfg()).unwrap();
        assert_eq!(res.size, 1);
        assert_eq!(res.weights[0], 40.0);
    }

    #[test]
    fn barycenter_requires_wasserstein_and_k1() {
        let p = plane(&[vec![0.0, 0.0], vec![1.0, 1.0]]);
        let params = ClusteringParams::new(1, 1.0, 0.25, 0.1, 3).unwrap();
        assert!(matches!(
            build_barycenter_coreset(&p, &params, &small_cfg()),
            Err(Error::BackendMismatch("wasserstein"))
        ));
    }
}
