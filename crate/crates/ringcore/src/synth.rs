//! Synthetic instance generators for benchmarks, harness stress tests and
//! the acceptance suite.

use crate::rng::rng_for;
use rand::Rng;
use rand_distr::StandardNormal;

/// `n` points from `components` spherical Gaussians with means uniform in
/// `[-center_spread, center_spread]^dim`; points round-robin across
/// components so counts stay balanced.
pub fn gaussian_mixture(
    n: usize,
    components: usize,
    dim: usize,
    center_spread: f64,
    sigma: f64,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut rng = rng_for(seed, &[0x676d6978]);
    let means: Vec<Vec<f64>> = (0..components)
        .map(|_| {
            (0..dim)
                .map(|_| rng.random_range(-center_spread..center_spread))
                .collect()
        })
        .collect();
    (0..n)
        .map(|i| {
            let m = &means[i % components];
            m.iter()
                .map(|&c| c + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect()
}

/// `n` points uniform in direction at radius in `(r, 2r]` around the origin.
pub fn ring_points(n: usize, dim: usize, r: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_for(seed, &[0x72737472]);
    (0..n)
        .map(|_| {
            let mut dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            let radius = r * (1.0 + (1.0 - rng.random::<f64>())); // (r, 2r]
            dir.iter_mut().for_each(|x| *x *= radius / norm);
            dir
        })
        .collect()
}

/// Ring-stress instance: a few dense clusters plus geometric shells around
/// the origin, built to spread mass over many dyadic rings.
pub fn ring_stress(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_for(seed, &[0x73747273]);
    (0..n)
        .map(|i| {
            let shell = (i % 12) as f64;
            let radius = 0.25 * 2.0f64.powf(shell * 0.75);
            let mut dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            dir.iter_mut()
                .for_each(|x| *x *= radius * rng.random_range(0.9..1.1) / norm);
            dir
        })
        .collect()
}

/// `count` l-tuples of `dim`-vectors scattered around Gaussian anchor points.
pub fn random_tuples(
    count: usize,
    l: usize,
    dim: usize,
    spread: f64,
    seed: u64,
) -> Vec<Vec<Vec<f64>>> {
    let mut rng = rng_for(seed, &[0x74757073]);
    (0..count)
        .map(|_| {
            let anchor: Vec<f64> = (0..dim)
                .map(|_| rng.random_range(-spread..spread))
                .collect();
            (0..l)
                .map(|_| {
                    anchor
                        .iter()
                        .map(|&a| a + rng.sample::<f64, _>(StandardNormal))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Random-walk polylines with `2..=max_vertices` vertices.
pub fn random_curves(
    count: usize,
    max_vertices: usize,
    dim: usize,
    spread: f64,
    seed: u64,
) -> Vec<Vec<Vec<f64>>> {
    let mut rng = rng_for(seed, &[0x63727673]);
    (0..count)
        .map(|_| {
            let m = rng.random_range(2..=max_vertices.max(2));
            let mut cur: Vec<f64> = (0..dim)
                .map(|_| rng.random_range(-spread..spread))
                .collect();
            (0..m)
                .map(|_| {
                    cur = cur
                        .iter()
                        .map(|&x| x + rng.sample::<f64, _>(StandardNormal))
                        .collect();
                    cur.clone()
                })
                .collect()
        })
        .collect()
}
