#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use signsum::config::{validate_config, NormMode, VectorConfig};

/// Every signed-sum norm squared, straight from the definition.
/// Entry `m` uses sign `-1` for vector `i` exactly when bit `i` of `m` is set.
pub fn brute_squared_norms(vectors: &[Vec<f64>], lambda: Option<&[f64]>) -> Vec<f64> {
    let n = vectors.len();
    let d = vectors[0].len();
    (0u64..1 << n)
        .map(|m| {
            let mut s = vec![0.0; d];
            for (i, v) in vectors.iter().enumerate() {
                let eta = if m >> i & 1 == 1 { -1.0 } else { 1.0 };
                let c = eta + lambda.map_or(0.0, |l| l[i]);
                for k in 0..d {
                    s[k] += c * v[k];
                }
            }
            s.iter().map(|x| x * x).sum()
        })
        .collect()
}

pub fn brute_min(vectors: &[Vec<f64>], lambda: Option<&[f64]>) -> f64 {
    brute_squared_norms(vectors, lambda)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

pub fn brute_hits(vectors: &[Vec<f64>], r: f64, tol: f64) -> u64 {
    brute_squared_norms(vectors, None)
        .into_iter()
        .filter(|&q| q <= r * r + tol)
        .count() as u64
}

pub fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

pub fn gaussian_unit(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    unit((0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
}

/// Haar-ish orthogonal matrix: QR of a Gaussian matrix.
pub fn random_orthogonal(d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let q = m.qr().q();
    (0..d).map(|i| (0..d).map(|j| q[(i, j)]).collect()).collect()
}

pub fn seeded_unit_config(d: usize, n: usize, seed: u64) -> VectorConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    VectorConfig::unit((0..n).map(|_| gaussian_unit(d, &mut rng)).collect()).unwrap()
}

/// Unit-vector configurations with `d` in `dims` and `n` in `ns`.
pub fn unit_config(dims: std::ops::RangeInclusive<usize>, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = VectorConfig> {
    (dims, ns, any::<u64>()).prop_map(|(d, n, seed)| seeded_unit_config(d, n, seed))
}

/// Vectors of norm at most 1.
pub fn ball_config(dims: std::ops::RangeInclusive<usize>, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = VectorConfig> {
    (dims, ns, any::<u64>()).prop_map(|(d, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = (0..n)
            .map(|_| {
                let r: f64 = rng.gen_range(0.0..=1.0);
                gaussian_unit(d, &mut rng).into_iter().map(|x| x * r).collect()
            })
            .collect();
        validate_config(raw, NormMode::Beck, 1e-9).unwrap()
    })
}

pub fn lambda_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..=1.0, n)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
