//! Empirical checks of the guarantees the reduction promises: the two-point
//! side of a decomposition is an additive-error assignment-preserving
//! coreset of Z, and the full pipeline behaves on every metric backend.

use ringcore::bicriteria::{bicriteria_approx, BicriteriaConfig};
use ringcore::composer::{build_coreset, CoresetMode, PipelineConfig};
use ringcore::dataset::{ClusteringParams, WeightedPointSet};
use ringcore::metric::{CurveSpace, EuclideanSpace, GraphMetric, MetricBackend, PointId};
use ringcore::oracle::{eval_harness, exhaustive_opt, HarnessConfig};
use ringcore::rings::{decompose, reduction_params};
use ringcore::rng::rng_for;
use ringcore::sampling::SamplingConfig;
use ringcore::synth;
use ringcore::transport::{solve_transport, AssignmentConstraint};

use rand::Rng;
use std::sync::Arc;

/// The decomposition's Z-side coreset must satisfy the additive
/// assignment-preserving contract: for arbitrary (C, Gamma),
/// `|cost(Z,C,Gamma) - cost(S_Z,C,Gamma)| <= eps * (cost(Z,C,Gamma) + cost(P,c))`.
#[test]
fn two_point_side_is_additive_assignment_preserving() {
    let mut worst_ratio: f64 = 0.0;
    for (z, eps) in [(1.0, 0.3), (2.0, 0.3)] {
        let pts = synth::gaussian_mixture(600, 3, 2, 6.0, 1.0, 606 + z as u64);
        let p = plane(&pts);
        let params = ClusteringParams::new(3, z, eps, 0.1, 3).unwrap();
        let bic = bicriteria_approx(&p, &params, &BicriteriaConfig::default()).unwrap();
        let clusters = ringcore::bicriteria::cluster_partition(&p, &bic);
        let (cluster, center) = &clusters[0];
        let rp = reduction_params(cluster, *center, &params).unwrap();
        let dec = decompose(cluster, *center, &rp).unwrap();
        let z_rows = dec.z_rows();
        if z_rows.is_empty() {
            continue;
        }
        let z_set = cluster.subset(&z_rows);
        let mut s_points = Vec::new();
        let mut s_weights = Vec::new();
        if let Some((id, w)) = dec.center_mass {
            s_points.push(id);
            s_weights.push(w);
        }
        for tp in &dec.two_points {
            if tp.w_close > 0.0 {
                s_points.push(tp.close);
                s_weights.push(tp.w_close);
            }
            if tp.w_far > 0.0 && tp.far != tp.close {
                s_points.push(tp.far);
                s_weights.push(tp.w_far);
            }
        }
        if s_points.is_empty() {
            continue;
        }
        let s_set =
            WeightedPointSet::new(cluster.backend().clone(), s_points, s_weights).unwrap();
        let wz = z_set.total_weight();
        assert!(
            (s_set.total_weight() - wz).abs() <= 1e-9 * wz,
            "w(S_Z) must equal w(Z)"
        );

        let mut rng = rng_for(55, &[z as u64]);
        let n = p.len();
        for trial in 0..30 {
            let centers: Vec<PointId> = (0..3).map(|_| p.point(rng.random_range(0..n))).collect();
            let gamma = if trial % 2 == 0 {
                AssignmentConstraint::induced(&z_set, &centers).unwrap()
            } else {
                AssignmentConstraint::random(3, wz, trial as u64).unwrap()
            };
            let cz = solve_transport(&z_set, &centers, &gamma, z).unwrap().objective;
            let cs = solve_transport(&s_set, &centers, &gamma, z).unwrap().objective;
            let bound = eps * (cz + rp.cost_to_center);
            assert!(
                (cz - cs).abs() <= bound,
                "z={z} trial {trial}: |{cz} - {cs}| > {bound}"
            );
            if bound > 0.0 {
                worst_ratio = worst_ratio.max((cz - cs).abs() / bound);
            }
        }
    }
    println!("worst additive ratio seen: {worst_ratio:.4}");
}

fn plane(rows: &[Vec<f64>]) -> WeightedPointSet {
    WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(
        EuclideanSpace::from_rows(2, rows).unwrap(),
    )))
    .unwrap()
}

fn desk_config() -> PipelineConfig {
    PipelineConfig {
        sampling: SamplingConfig {
            c0: 0.001,
            c1: 0.02,
            ..SamplingConfig::default()
        },
        bicriteria: BicriteriaConfig {
            alpha_override: Some(1.0),
            ..BicriteriaConfig::default()
        },
    }
}

/// Full pipeline on a graph metric: weights conserved, handles valid, and
/// the coreset approximates the cost on data-subset center sets.
#[test]
fn pipeline_on_graph_metric() {
    let mut rng = rng_for(404, &[]);
    let n = 300usize;
    // two communities joined by one long edge
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for v in 1..150 {
        edges.push((v - 1, v, rng.random_range(0.5..1.5)));
    }
    for v in 151..n {
        edges.push((v - 1, v, rng.random_range(0.5..1.5)));
    }
    edges.push((75, 225, 40.0));
    edges.push((149, 150, 40.0));
    for _ in 0..150 {
        let a = rng.random_range(0..150);
        let b = rng.random_range(0..150);
        if a != b {
            edges.push((a, b, rng.random_range(0.5..3.0)));
        }
        let c = 150 + rng.random_range(0..150);
        let d = 150 + rng.random_range(0..150);
        if c != d {
            edges.push((c, d, rng.random_range(0.5..3.0)));
        }
    }
    let graph = GraphMetric::from_edges(n, &edges, 8).unwrap();
    let p = WeightedPointSet::unit(Arc::new(MetricBackend::Graph(graph))).unwrap();
    let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 11).unwrap();
    let coreset = build_coreset(&p, &params, CoresetMode::Vanilla, &desk_config()).unwrap();
    // shortest-path cache state must not leak into results: a rebuild on a
    // warm backend is byte-identical
    let again = build_coreset(&p, &params, CoresetMode::Vanilla, &desk_config()).unwrap();
    assert_eq!(
        ringcore::io::to_canonical_json(&coreset).unwrap(),
        ringcore::io::to_canonical_json(&again).unwrap()
    );
    assert!((coreset.total_weight() - n as f64).abs() <= 1e-9);
    assert!(coreset.size <= n);
    let s = coreset.to_point_set(p.backend().clone()).unwrap();
    let report = eval_harness(&p, &s, &params, &HarnessConfig::new(30, 4, 0.3)).unwrap();
    assert!(
        report.max_rel_err <= 0.3,
        "graph pipeline rel err {}",
        report.max_rel_err
    );
}

/// Full pipeline on discrete Fréchet curves.
#[test]
fn pipeline_on_frechet_curves() {
    let curves = synth::random_curves(250, 6, 2, 5.0, 77);
    let space = CurveSpace::from_curves(2, &curves).unwrap();
    let p = WeightedPointSet::unit(Arc::new(MetricBackend::Frechet(space))).unwrap();
    let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 13).unwrap();
    let coreset = build_coreset(&p, &params, CoresetMode::Vanilla, &desk_config()).unwrap();
    assert!((coreset.total_weight() - 250.0).abs() <= 1e-9);
    let s = coreset.to_point_set(p.backend().clone()).unwrap();
    let report = eval_harness(&p, &s, &params, &HarnessConfig::new(30, 5, 0.3)).unwrap();
    assert!(
        report.max_rel_err <= 0.3,
        "frechet pipeline rel err {}",
        report.max_rel_err
    );
}

/// Pipeline on the Wasserstein backend through the generic (k > 1) route.
#[test]
fn pipeline_on_tuple_metric_k2() {
    let tuples = synth::random_tuples(200, 3, 2, 8.0, 55);
    let space = ringcore::metric::TupleSpace::from_tuples(3, 2, 1.0, &tuples).unwrap();
    let p = WeightedPointSet::unit(Arc::new(MetricBackend::Wasserstein(space))).unwrap();
    let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 15).unwrap();
    let coreset = build_coreset(&p, &params, CoresetMode::Vanilla, &desk_config()).unwrap();
    assert!((coreset.total_weight() - 200.0).abs() <= 1e-9);
    let s = coreset.to_point_set(p.backend().clone()).unwrap();
    let report = eval_harness(&p, &s, &params, &HarnessConfig::new(20, 6, 0.3)).unwrap();
    assert!(report.max_rel_err <= 0.3, "tuple rel err {}", report.max_rel_err);
}

/// Per-signature parts of a fair coreset preserve their constrained costs:
/// evaluating each part against random centers under its induced constraint
/// stays within eps on both sides.
#[test]
fn fair_parts_preserve_constrained_costs() {
    use ringcore::composer::build_fair_coreset;
    let eps = 0.3;
    let pts = synth::gaussian_mixture(240, 2, 2, 7.0, 1.0, 2468);
    let mut rng = rng_for(2468, &[9]);
    let labels: Vec<Vec<String>> = (0..pts.len())
        .map(|_| {
            ["a", "b", "c"]
                .iter()
                .filter(|_| rng.random::<f64>() < 0.5)
                .map(|s| s.to_string())
                .collect()
        })
        .collect();
    let p = plane(&pts).with_labels(labels.clone()).unwrap();
    let params = ClusteringParams::new(2, 1.0, eps, 0.1, 31).unwrap();
    let mut cfg = desk_config();
    cfg.sampling.c0 = 0.0002;
    let fair = build_fair_coreset(&p, &params, &cfg).unwrap();
    let coreset_labels = fair.labels.as_ref().unwrap();

    // group rows and coreset entries by signature
    let mut part_rows: std::collections::BTreeMap<Vec<String>, Vec<usize>> = Default::default();
    for (row, sig) in labels.iter().enumerate() {
        part_rows.entry(sig.clone()).or_default().push(row);
    }
    let backend = p.backend().clone();
    for (sig, rows) in &part_rows {
        let part_p = p.subset(rows);
        let entries: Vec<(PointId, f64)> = fair
            .points
            .iter()
            .zip(&fair.weights)
            .zip(coreset_labels)
            .filter(|(_, l)| *l == sig)
            .map(|((id, w), _)| (*id, *w))
            .collect();
        let part_s = WeightedPointSet::new(
            backend.clone(),
            entries.iter().map(|e| e.0).collect(),
            entries.iter().map(|e| e.1).collect(),
        )
        .unwrap();
        for trial in 0..6 {
            let mut trng = rng_for(777, &[trial]);
            let centers: Vec<PointId> =
                (0..2).map(|_| p.point(trng.random_range(0..p.len()))).collect();
            let gamma = AssignmentConstraint::induced(&part_p, &centers).unwrap();
            let cp = solve_transport(&part_p, &centers, &gamma, 1.0).unwrap().objective;
            let cs = solve_transport(&part_s, &centers, &gamma, 1.0).unwrap().objective;
            let rel = if cp > 0.0 { (cp - cs).abs() / cp } else { 0.0 };
            assert!(
                rel <= eps,
                "signature {sig:?} trial {trial}: rel err {rel}"
            );
        }
    }
}

/// Non-unit weights flow through every stage; the eps^-3 budget form is a
/// drop-in replacement for the default.
#[test]
fn weighted_pipeline_with_eps3_budget() {
    use ringcore::sampling::BudgetForm;
    let mut rng = rng_for(99, &[1]);
    let pts = synth::gaussian_mixture(700, 3, 2, 8.0, 1.0, 700);
    let weights: Vec<f64> = (0..pts.len()).map(|_| rng.random_range(0.1..3.0)).collect();
    let space = EuclideanSpace::from_rows(2, &pts).unwrap();
    let p = WeightedPointSet::new(
        Arc::new(MetricBackend::Euclidean(space)),
        (0..pts.len()).map(PointId).collect(),
        weights,
    )
    .unwrap();
    let params = ClusteringParams::new(3, 1.0, 0.3, 0.1, 41).unwrap();
    let mut cfg = desk_config();
    cfg.sampling.budget_form = BudgetForm::Eps3WithDim;
    cfg.sampling.c0 = 0.001;
    let coreset =
        build_coreset(&p, &params, CoresetMode::AssignmentPreserving, &cfg).unwrap();
    assert!(coreset.size < p.len(), "sampling must bite");
    let w = p.total_weight();
    assert!((coreset.total_weight() - w).abs() <= 1e-9 * w);
    let s = coreset.to_point_set(p.backend().clone()).unwrap();
    let mut hcfg = HarnessConfig::new(20, 17, 0.3);
    hcfg.constrained = true;
    let report = eval_harness(&p, &s, &params, &hcfg).unwrap();
    assert!(report.max_rel_err <= 0.3, "rel err {}", report.max_rel_err);
}

/// Seeding quality against the exhaustive data-point optimum: the best of 20
/// seeds must land within 5x on a mixture instance small enough for the
/// enumeration budget.
#[test]
fn bicriteria_median_quality_vs_exhaustive() {
    let pts = synth::gaussian_mixture(40, 4, 2, 8.0, 1.0, 2024);
    let p = plane(&pts);
    let (opt, _) = exhaustive_opt(&p, 4, 2.0, None).unwrap();
    assert!(opt > 0.0);
    let mut costs: Vec<f64> = Vec::new();
    for seed in 0..20 {
        let params = ClusteringParams::new(4, 2.0, 0.2, 0.1, seed).unwrap();
        let res = bicriteria_approx(&p, &params, &BicriteriaConfig::default()).unwrap();
        costs.push(res.total_cost);
    }
    costs.sort_by(f64::total_cmp);
    let median = costs[costs.len() / 2];
    assert!(
        median <= 5.0 * opt,
        "median seeding cost {median} vs optimum {opt}"
    );
}
