//! Brute-force oracles and the randomized evaluation harness. Oracles share
//! nothing with the main solvers beyond `dist` itself: optima come from plain
//! enumeration so they can referee the clever paths.

use crate::bicriteria::{bicriteria_approx, BicriteriaConfig};
use crate::dataset::{exp2i, powz, ring_index, ClusteringParams, WeightedPointSet};
use crate::error::{Error, Result};
use crate::metric::{MetricBackend, PointId};
use crate::rng::rng_for;
use crate::transport::{solve_transport, AssignmentConstraint};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut b = 1.0f64;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
        if b > 1e18 {
            return b;
        }
    }
    b
}

/// Exact minimum of `cost_z(P, C)` over all k-subsets of the candidate
/// centers (the data points by default). Refuses instances past 10^6
/// combinations.
pub fn exhaustive_opt(
    p: &WeightedPointSet,
    k: usize,
    z: f64,
    candidates: Option<&[PointId]>,
) -> Result<(f64, Vec<PointId>)> {
    let cands: Vec<PointId> = match candidates {
        Some(c) => c.to_vec(),
        None => p.points().to_vec(),
    };
    let n = cands.len();
    if k == 0 || k > n {
        return Err(Error::Config(format!("k = {k} out of range for {n} candidates")));
    }
    let combos = binomial(n, k);
    if combos > 1e6 {
        return Err(Error::BudgetExceeded(format!(
            "C({n},{k}) = {combos:.0} exceeds the 1e6 combination budget"
        )));
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best_cost = f64::INFINITY;
    let mut best: Vec<PointId> = Vec::new();
    loop {
        let centers: Vec<PointId> = idx.iter().map(|&i| cands[i]).collect();
        let cost = p.cost_z(&centers, z)?;
        if cost < best_cost {
            best_cost = cost;
            best = centers;
        }
        // next combination in lexicographic order
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + n - k {
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return Ok((best_cost, best));
            }
        }
    }
}

/// Exact constrained optimum on tiny integral instances by enumerating every
/// integral assignment. Valid as an oracle for the fractional solver because
/// transportation polytopes with integral marginals have integral vertices.
pub fn brute_transport(
    p: &WeightedPointSet,
    centers: &[PointId],
    gamma: &[u64],
    z: f64,
) -> Result<f64> {
    let k = centers.len();
    if k == 0 {
        return Err(Error::EmptyCenters);
    }
    if k > 3 {
        return Err(Error::BudgetExceeded(format!("k = {k} > 3")));
    }
    let mut weights = Vec::with_capacity(p.len());
    let mut total = 0u64;
    for i in 0..p.len() {
        let w = p.weight(i);
        if w.fract() != 0.0 {
            return Err(Error::Config(format!("weight {w} is not integral")));
        }
        weights.push(w as u64);
        total += w as u64;
    }
    if total > 12 {
        return Err(Error::BudgetExceeded(format!("total mass {total} > 12")));
    }
    if gamma.iter().sum::<u64>() != total {
        return Err(Error::MassMismatch {
            constraint: gamma.iter().sum::<u64>() as f64,
            weight: total as f64,
        });
    }
    let mut cost = vec![0.0; p.len() * k];
    for i in 0..p.len() {
        for (j, &c) in centers.iter().enumerate() {
            cost[i * k + j] = powz(p.dist(i, c)?, z);
        }
    }
    let mut remaining: Vec<u64> = gamma.to_vec();
    let mut best = f64::INFINITY;
    enumerate_assignments(&weights, &cost, k, 0, &mut remaining, 0.0, &mut best);
    Ok(best)
}

fn enumerate_assignments(
    weights: &[u64],
    cost: &[f64],
    k: usize,
    point: usize,
    remaining: &mut Vec<u64>,
    acc: f64,
    best: &mut f64,
) {
    if acc >= *best {
        return;
    }
    if point == weights.len() {
        *best = acc;
        return;
    }
    // all ways to split this point's mass across the centers
    #[allow(clippy::too_many_arguments)]
    fn split(
        weights: &[u64],
        cost: &[f64],
        k: usize,
        point: usize,
        center: usize,
        left: u64,
        remaining: &mut Vec<u64>,
        acc: f64,
        best: &mut f64,
    ) {
        if center == k - 1 {
            if remaining[center] < left {
                return;
            }
            let add = left as f64 * cost[point * k + center];
            remaining[center] -= left;
            enumerate_assignments(weights, cost, k, point + 1, remaining, acc + add, best);
            remaining[center] += left;
            return;
        }
        let cap = remaining[center].min(left);
        for m in 0..=cap {
            let add = m as f64 * cost[point * k + center];
            remaining[center] -= m;
            split(
                weights,
                cost,
                k,
                point,
                center + 1,
                left - m,
                remaining,
                acc + add,
                best,
            );
            remaining[center] += m;
        }
    }
    split(weights, cost, k, point, 0, weights[point], remaining, acc, best);
}

/// Exact p-Wasserstein distance between two l-tuples by enumerating all l!
/// bijections; l <= 6. Uses its own arithmetic end to end.
pub fn brute_wasserstein(a: &[Vec<f64>], b: &[Vec<f64>], p: f64) -> Result<f64> {
    let l = a.len();
    if l != b.len() {
        return Err(Error::TupleLength {
            expected: l,
            got: b.len(),
        });
    }
    if l > 6 {
        return Err(Error::BudgetExceeded(format!("l = {l} > 6")));
    }
    fn euclid(x: &[f64], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt()
    }
    let mut perm: Vec<usize> = (0..l).collect();
    let mut best = f64::INFINITY;
    fn rec(
        perm: &mut Vec<usize>,
        k: usize,
        a: &[Vec<f64>],
        b: &[Vec<f64>],
        p: f64,
        best: &mut f64,
        euclid: &dyn Fn(&[f64], &[f64]) -> f64,
    ) {
        if k == perm.len() {
            let total: f64 = perm
                .iter()
                .enumerate()
                .map(|(i, &j)| euclid(&a[i], &b[j]).powf(p))
                .sum();
            if total < *best {
                *best = total;
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(perm, k + 1, a, b, p, best, euclid);
            perm.swap(k, i);
        }
    }
    rec(&mut perm, 0, a, b, p, &mut best, &euclid);
    Ok(best.powf(1.0 / p))
}

// ---------------------------------------------------------------------------
// Evaluation harness
// ---------------------------------------------------------------------------

/// Center-set generators mixed by the harness. Generators that need
/// synthesized coordinates degrade to data-point variants on backends where
/// points cannot be fabricated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterGen {
    /// Uniform in the data bounding box (coordinate backends).
    BoundingBox,
    /// k distinct-ish data points.
    DataSubset,
    /// Bicriteria centers with jitter (or one random replacement).
    PerturbedBicriteria,
    /// Centers pinned near dyadic ring boundaries around bicriteria centers;
    /// these stress the grouped-ring error path hardest.
    RingBoundary,
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub trials: usize,
    /// Evaluate `cost_z(.., C, Gamma)` through the transport solver instead
    /// of the unconstrained cost.
    pub constrained: bool,
    pub seed: u64,
    /// Relative-error threshold a trial must stay within to count as a pass.
    pub threshold: f64,
    /// Optional additive normalizer A: reports `|cs - cp| / (cp + A)`.
    pub additive_norm: Option<f64>,
    /// Generator cycle; empty selects a backend-appropriate default mix.
    pub generators: Vec<CenterGen>,
}

impl HarnessConfig {
    pub fn new(trials: usize, seed: u64, threshold: f64) -> Self {
        Self {
            trials,
            constrained: false,
            seed,
            threshold,
            additive_norm: None,
            generators: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalTrial {
    pub generator: CenterGen,
    pub centers: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    pub cost_input: f64,
    pub cost_coreset: f64,
    pub rel_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub additive_err: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub trials: Vec<EvalTrial>,
    pub threshold: f64,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
    pub p50_rel_err: f64,
    pub p90_rel_err: f64,
    pub max_additive_err: Option<f64>,
    pub failures: usize,
}

impl EvalReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = (q * (sorted.len() - 1) as f64).round() as usize;
    sorted[pos.min(sorted.len() - 1)]
}

enum CenterSpec {
    Handles(Vec<PointId>),
    Euclidean(Vec<Vec<f64>>),
    Tuples(Vec<Vec<Vec<f64>>>),
}

/// Draws `trials` center sets (and constraints, in constrained mode) from
/// the generator mix and evaluates `P` against `S` on each, aggregating
/// relative and additive-normalized errors.
pub fn eval_harness(
    p: &WeightedPointSet,
    s: &WeightedPointSet,
    params: &ClusteringParams,
    cfg: &HarnessConfig,
) -> Result<EvalReport> {
    let backend = p.backend();
    let generators: Vec<CenterGen> = if cfg.generators.is_empty() {
        match backend.as_ref() {
            MetricBackend::Euclidean(_) | MetricBackend::Wasserstein(_) => vec![
                CenterGen::BoundingBox,
                CenterGen::DataSubset,
                CenterGen::PerturbedBicriteria,
                CenterGen::RingBoundary,
            ],
            _ => vec![
                CenterGen::DataSubset,
                CenterGen::PerturbedBicriteria,
                CenterGen::RingBoundary,
            ],
        }
    } else {
        cfg.generators.clone()
    };

    let bic = bicriteria_approx(p, params, &BicriteriaConfig::default())?;
    // distances to bicriteria centers drive the ring-boundary generator
    let mut ring_indices: Vec<Vec<i32>> = Vec::with_capacity(bic.centers.len());
    for &c in &bic.centers {
        let mut idxs: Vec<i32> = (0..p.len())
            .filter_map(|i| ring_index(p.dist(i, c).ok()?))
            .collect();
        idxs.sort_unstable();
        idxs.dedup();
        ring_indices.push(idxs);
    }

    let mut rng = rng_for(cfg.seed, &[0x6576616c]);
    let mut specs: Vec<(CenterGen, CenterSpec)> = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let gen = generators[t % generators.len()];
        let spec = draw_center_set(p, backend, &bic.centers, &ring_indices, gen, params.k, &mut rng)?;
        specs.push((gen, spec));
    }

    // one batched append so every synthetic center gets a stable handle
    let mut synth_coords: Vec<Vec<f64>> = Vec::new();
    let mut synth_tuples: Vec<Vec<Vec<f64>>> = Vec::new();
    for (_, spec) in &specs {
        match spec {
            CenterSpec::Euclidean(rows) => synth_coords.extend(rows.iter().cloned()),
            CenterSpec::Tuples(ts) => synth_tuples.extend(ts.iter().cloned()),
            CenterSpec::Handles(_) => {}
        }
    }
    let (eval_backend, synth_ids) = if !synth_coords.is_empty() {
        let (b, ids) = backend.append_euclidean(&synth_coords)?;
        (Arc::new(b), ids)
    } else if !synth_tuples.is_empty() {
        let (b, ids) = backend.append_tuples(&synth_tuples)?;
        (Arc::new(b), ids)
    } else {
        (backend.clone(), Vec::new())
    };
    let mut next_synth = 0usize;
    let trials_input: Vec<(CenterGen, Vec<PointId>)> = specs
        .into_iter()
        .map(|(gen, spec)| {
            let handles = match spec {
                CenterSpec::Handles(h) => h,
                CenterSpec::Euclidean(rows) => {
                    let h = synth_ids[next_synth..next_synth + rows.len()].to_vec();
                    next_synth += rows.len();
                    h
                }
                CenterSpec::Tuples(ts) => {
                    let h = synth_ids[next_synth..next_synth + ts.len()].to_vec();
                    next_synth += ts.len();
                    h
                }
            };
            (gen, handles)
        })
        .collect();

    let p_eval = p.with_backend(eval_backend.clone());
    let s_eval = s.with_backend(eval_backend);
    let w_total = p_eval.total_weight();

    let trials: Vec<Result<EvalTrial>> = trials_input
        .par_iter()
        .enumerate()
        .map(|(t, (gen, centers))| {
            let (cost_input, cost_coreset, gamma) = if cfg.constrained {
                // alternate induced and Dirichlet constraints
                let gamma = if t % 2 == 0 {
                    AssignmentConstraint::induced(&p_eval, centers)?
                } else {
                    AssignmentConstraint::random(
                        centers.len(),
                        w_total,
                        crate::rng::stream_seed(cfg.seed, &[0x67616d, t as u64]),
                    )?
                };
                let cp = solve_transport(&p_eval, centers, &gamma, params.z)?.objective;
                let cs = solve_transport(&s_eval, centers, &gamma, params.z)?.objective;
                (cp, cs, Some(gamma.masses().to_vec()))
            } else {
                (
                    p_eval.cost_z(centers, params.z)?,
                    s_eval.cost_z(centers, params.z)?,
                    None,
                )
            };
            let diff = (cost_input - cost_coreset).abs();
            let rel_err = if cost_input > 0.0 {
                diff / cost_input
            } else if cost_coreset > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            let additive_err = cfg.additive_norm.map(|a| diff / (cost_input + a));
            Ok(EvalTrial {
                generator: *gen,
                centers: centers.iter().map(|c| c.0).collect(),
                gamma,
                cost_input,
                cost_coreset,
                rel_err,
                additive_err,
            })
        })
        .collect();
    let trials: Vec<EvalTrial> = trials.into_iter().collect::<Result<_>>()?;

    let mut rels: Vec<f64> = trials.iter().map(|t| t.rel_err).collect();
    rels.sort_by(f64::total_cmp);
    let max_rel_err = rels.last().copied().unwrap_or(0.0);
    let mean_rel_err = rels.iter().sum::<f64>() / rels.len().max(1) as f64;
    let max_additive_err = trials
        .iter()
        .filter_map(|t| t.additive_err)
        .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
    let failures = match cfg.additive_norm {
        Some(_) => trials
            .iter()
            .filter(|t| t.additive_err.unwrap_or(f64::INFINITY) > cfg.threshold)
            .count(),
        None => trials.iter().filter(|t| t.rel_err > cfg.threshold).count(),
    };
    Ok(EvalReport {
        threshold: cfg.threshold,
        max_rel_err,
        mean_rel_err,
        p50_rel_err: quantile(&rels, 0.5),
        p90_rel_err: quantile(&rels, 0.9),
        max_additive_err,
        failures,
        trials,
    })
}

fn bounding_box(space: &crate::metric::EuclideanSpace, points: &[PointId]) -> (Vec<f64>, Vec<f64>) {
    let d = space.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for &pid in points {
        for (j, &x) in space.point(pid.0).iter().enumerate() {
            lo[j] = lo[j].min(x);
            hi[j] = hi[j].max(x);
        }
    }
    (lo, hi)
}

fn draw_center_set(
    p: &WeightedPointSet,
    backend: &MetricBackend,
    bic_centers: &[PointId],
    ring_indices: &[Vec<i32>],
    gen: CenterGen,
    k: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<CenterSpec> {
    let n = p.len();
    let data_subset = |rng: &mut rand_chacha::ChaCha8Rng| {
        CenterSpec::Handles((0..k).map(|_| p.point(rng.random_range(0..n))).collect())
    };
    Ok(match (gen, backend) {
        (CenterGen::BoundingBox, MetricBackend::Euclidean(space)) => {
            let (lo, hi) = bounding_box(space, p.points());
            CenterSpec::Euclidean(
                (0..k)
                    .map(|_| {
                        lo.iter()
                            .zip(&hi)
                            .map(|(&a, &b)| if a < b { rng.random_range(a..b) } else { a })
                            .collect()
                    })
                    .collect(),
            )
        }
        (CenterGen::BoundingBox, MetricBackend::Wasserstein(space)) => {
            let l = space.tuple_len();
            let d = space.dim();
            // bbox over all tuple vertices
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            for &pid in p.points() {
                for v in space.tuple(pid.0) {
                    for j in 0..d {
                        lo[j] = lo[j].min(v[j]);
                        hi[j] = hi[j].max(v[j]);
                    }
                }
            }
            CenterSpec::Tuples(
                (0..k)
                    .map(|_| {
                        (0..l)
                            .map(|_| {
                                lo.iter()
                                    .zip(&hi)
                                    .map(|(&a, &b)| if a < b { rng.random_range(a..b) } else { a })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
        (CenterGen::PerturbedBicriteria, MetricBackend::Euclidean(space)) => {
            let (lo, hi) = bounding_box(space, p.points());
            let scale: f64 = lo
                .iter()
                .zip(&hi)
                .map(|(&a, &b)| b - a)
                .fold(0.0, f64::max)
                * 0.05;
            CenterSpec::Euclidean(
                (0..k)
                    .map(|_| {
                        let c = bic_centers[rng.random_range(0..bic_centers.len())];
                        space
                            .point(c.0)
                            .iter()
                            .map(|&x| x + scale * rng.sample::<f64, _>(StandardNormal))
                            .collect()
                    })
                    .collect(),
            )
        }
        (CenterGen::RingBoundary, MetricBackend::Euclidean(space)) => {
            // place the center exactly on a dyadic boundary around a
            // bicriteria center, in a random direction
            let d = space.dim();
            CenterSpec::Euclidean(
                (0..k)
                    .map(|_| {
                        let ci = rng.random_range(0..bic_centers.len());
                        let base = space.point(bic_centers[ci].0).to_vec();
                        let idxs = &ring_indices[ci];
                        if idxs.is_empty() {
                            return base;
                        }
                        let i = idxs[rng.random_range(0..idxs.len())];
                        let radius = exp2i(i);
                        let mut dir: Vec<f64> =
                            (0..d).map(|_| rng.sample(StandardNormal)).collect();
                        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
                        for x in &mut dir {
                            *x /= norm;
                        }
                        base.iter().zip(&dir).map(|(&b, &u)| b + radius * u).collect()
                    })
                    .collect(),
            )
        }
        (CenterGen::RingBoundary, _) => {
            // nearest data point to a dyadic boundary around a bicriteria
            // center
            let mut handles = Vec::with_capacity(k);
            for _ in 0..k {
                let ci = rng.random_range(0..bic_centers.len());
                let idxs = &ring_indices[ci];
                if idxs.is_empty() {
                    handles.push(p.point(rng.random_range(0..n)));
                    continue;
                }
                let i = idxs[rng.random_range(0..idxs.len())];
                let boundary = exp2i(i);
                let mut best = 0usize;
                let mut best_gap = f64::INFINITY;
                for row in 0..n {
                    let gap = (p.dist(row, bic_centers[ci])? - boundary).abs();
                    if gap < best_gap {
                        best_gap = gap;
                        best = row;
                    }
                }
                handles.push(p.point(best));
            }
            CenterSpec::Handles(handles)
        }
        (CenterGen::PerturbedBicriteria, _) => {
            // bicriteria centers, one swapped for a random data point
            let mut handles: Vec<PointId> = (0..k)
                .map(|i| bic_centers[i % bic_centers.len()])
                .collect();
            let swap = rng.random_range(0..k);
            handles[swap] = p.point(rng.random_range(0..n));
            CenterSpec::Handles(handles)
        }
        (CenterGen::DataSubset, _) | (CenterGen::BoundingBox, _) => data_subset(rng),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::EuclideanSpace;
    use crate::transport::solve_transport;

    fn line(xs: &[f64]) -> WeightedPointSet {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(
            EuclideanSpace::from_rows(1, &rows).unwrap(),
        )))
        .unwrap()
    }

    #[test]
    fn exhaustive_opt_examples() {
        let p = line(&[0.0, 1.0, 10.0, 11.0]);
        let (cost, centers) = exhaustive_opt(&p, 2, 1.0, None).unwrap();
        assert_eq!(cost, 2.0);
        assert_eq!(centers.len(), 2);
        let (zero, _) = exhaustive_opt(&p, 4, 1.0, None).unwrap();
        assert_eq!(zero, 0.0);
        let q = line(&[0.0, 1.0, 2.0]);
        let (med, c) = exhaustive_opt(&q, 1, 1.0, None).unwrap();
        assert_eq!(med, 2.0);
        assert_eq!(c, vec![PointId(1)]);
    }

    #[test]
    fn exhaustive_opt_budget() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let p = line(&xs);
        assert!(matches!(
            exhaustive_opt(&p, 50, 1.0, None),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn brute_transport_reproduces_trivial_cases() {
        let p = line(&[0.0, 1.0]);
        let centers = [PointId(0), PointId(1)];
        assert_eq!(brute_transport(&p, &centers, &[1, 1], 1.0).unwrap(), 0.0);
        assert_eq!(brute_transport(&p, &centers, &[2, 0], 1.0).unwrap(), 1.0);
        assert!(matches!(
            brute_transport(&p, &centers, &[2, 1], 1.0),
            Err(Error::MassMismatch { .. })
        ));
    }

    #[test]
    fn solver_matches_integral_enumeration() {
        use rand::prelude::*;
        let mut rng = rng_for(13, &[1]);
        for trial in 0..30 {
            let n = rng.random_range(2..6);
            let k = rng.random_range(1..4usize);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let ws: Vec<f64> = (0..n).map(|_| rng.random_range(1..3) as f64).collect();
            let total: f64 = ws.iter().sum();
            if total > 12.0 {
                continue;
            }
            let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
            let backend = Arc::new(MetricBackend::Euclidean(
                EuclideanSpace::from_rows(1, &rows).unwrap(),
            ));
            let p = WeightedPointSet::new(backend, (0..n).map(PointId).collect(), ws).unwrap();
            let centers: Vec<PointId> = (0..k).map(|j| PointId(j % n)).collect();
            // random integral constraint summing to the total
            let mut gamma = vec![0u64; k];
            for _ in 0..total as u64 {
                gamma[rng.random_range(0..k)] += 1;
            }
            for z in [1.0, 2.0] {
                let exact = brute_transport(&p, &centers, &gamma, z).unwrap();
                let gamma_f =
                    AssignmentConstraint::new(gamma.iter().map(|&g| g as f64).collect()).unwrap();
                let solved = solve_transport(&p, &centers, &gamma_f, z).unwrap().objective;
                assert!(
                    (solved - exact).abs() <= 1e-9 * exact.max(1.0),
                    "trial {trial} z {z}: {solved} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn harness_zero_error_on_identity() {
        let p = line(&[0.0, 1.0, 2.0, 7.0, 9.0]);
        let params = ClusteringParams::new(2, 1.0, 0.2, 0.1, 3).unwrap();
        let cfg = HarnessConfig::new(20, 5, 0.1);
        let report = eval_harness(&p, &p, &params, &cfg).unwrap();
        assert_eq!(report.max_rel_err, 0.0);
        assert_eq!(report.failures, 0);
        // errors recomputed from stored costs match stored errors
        for t in &report.trials {
            let want = if t.cost_input > 0.0 {
                (t.cost_input - t.cost_coreset).abs() / t.cost_input
            } else {
                0.0
            };
            assert!((t.rel_err - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn harness_is_deterministic() {
        let p = line(&[0.0, 1.5, 2.0, 7.0, 9.0, 12.0]);
        let params = ClusteringParams::new(2, 1.0, 0.2, 0.1, 3).unwrap();
        let cfg = HarnessConfig::new(12, 8, 0.5);
        let a = eval_harness(&p, &p, &params, &cfg).unwrap();
        let b = eval_harness(&p, &p, &params, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn constrained_harness_runs_transport_on_both_sides() {
        let p = line(&[0.0, 1.0, 2.0, 3.0, 10.0, 11.0]);
        let params = ClusteringParams::new(2, 1.0, 0.3, 0.1, 3).unwrap();
        let mut cfg = HarnessConfig::new(6, 2, 0.2);
        cfg.constrained = true;
        let report = eval_harness(&p, &p, &params, &cfg).unwrap();
        assert_eq!(report.max_rel_err, 0.0);
        assert!(report.trials.iter().all(|t| t.gamma.is_some()));
    }
}
