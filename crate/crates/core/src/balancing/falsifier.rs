use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{axpy, dot, CoefficientVector, VectorConfig};
use crate::error::{Error, Result};
use crate::geometry::nearest_orthonormal;

/// Largest `n` the falsifier accepts; every evaluation scans `2^n` sums.
pub const FALSIFIER_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FalsifierSettings {
    /// Initial pattern-search step.
    pub initial_step: f64,
    /// The search stops once the step falls below this.
    pub min_step: f64,
    /// Cap on accepted moves per start.
    pub max_moves: usize,
}

impl Default for FalsifierSettings {
    fn default() -> Self {
        FalsifierSettings {
            initial_step: 0.5,
            min_step: 1e-7,
            max_moves: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FalsifierOutcome {
    /// Some `lambda` with `g(lambda) > r`, if one was found.
    pub witness: Option<CoefficientVector>,
    /// The best point seen and its value.
    pub best_lambda: CoefficientVector,
    pub best_value: f64,
    /// Index of the start that produced the best point.
    pub best_start: usize,
    pub starts: usize,
}

/// `g(lambda) = min_eta ||sum (lambda_i + eta_i) v_i||^2`, by exhaustive search.
pub fn approximation_value(config: &VectorConfig, lambda: &CoefficientVector) -> Result<f64> {
    let sums = SignedSums::new(config)?;
    Ok(sums.value(config, lambda.values()))
}

/// Searches for `lambda` that is poorly approximated, i.e. `g(lambda) > r`.
///
/// Start 0 is `lambda = 0`; the others alternate between uniform points of the
/// cube and points of random `k`-faces (`k = min(d, n)` free coordinates, the
/// rest at `+-1`). Each start climbs by coordinate pattern search. Starts run
/// in parallel; the best value wins, ties to the lowest start.
pub fn approximation_falsifier(
    config: &VectorConfig,
    r: f64,
    budget: usize,
    seed: u64,
) -> Result<FalsifierOutcome> {
    approximation_falsifier_with(config, r, budget, seed, &FalsifierSettings::default())
}

pub fn approximation_falsifier_with(
    config: &VectorConfig,
    r: f64,
    budget: usize,
    seed: u64,
    settings: &FalsifierSettings,
) -> Result<FalsifierOutcome> {
    if budget == 0 {
        return Err(Error::InvalidParameter("falsifier budget must be at least 1".into()));
    }
    let sums = SignedSums::new(config)?;
    let n = config.len();
    let k = config.dim().min(n);
    let results: Vec<(Vec<f64>, f64)> = (0..budget)
        .into_par_iter()
        .map(|start| {
            let lam0 = if start == 0 {
                vec![0.0; n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(start as u64);
                if start % 2 == 1 {
                    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
                } else {
                    let free = sample(&mut rng, n, k);
                    let mut lam: Vec<f64> = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
                    for i in free.iter() {
                        lam[i] = rng.gen_range(-1.0..=1.0);
                    }
                    lam
                }
            };
            climb(&sums, config, lam0, settings)
        })
        .collect();

    let (best_start, (best, value)) = results
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1 .1 > a.1 .1 { b } else { a })
        .expect("budget >= 1");
    let best_lambda = CoefficientVector::new(best)?;
    Ok(FalsifierOutcome {
        witness: (value > r).then(|| best_lambda.clone()),
        best_lambda,
        best_value: value,
        best_start,
        starts: budget,
    })
}

fn climb(sums: &SignedSums, config: &VectorConfig, mut lam: Vec<f64>, s: &FalsifierSettings) -> (Vec<f64>, f64) {
    let mut value = sums.value(config, &lam);
    let mut h = s.initial_step;
    let mut moves = 0;
    while h >= s.min_step && moves < s.max_moves {
        let mut improved = false;
        for i in 0..lam.len() {
            for dir in [1.0, -1.0] {
                let old = lam[i];
                let new = (old + dir * h).clamp(-1.0, 1.0);
                if new == old {
                    continue;
                }
                lam[i] = new;
                let v = sums.value(config, &lam);
                if v > value {
                    value = v;
                    improved = true;
                    moves += 1;
                } else {
                    lam[i] = old;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (lam, value)
}

/// All `2^n` signed sums, flattened.
struct SignedSums {
    dim: usize,
    sums: Vec<f64>,
}

impl SignedSums {
    fn new(config: &VectorConfig) -> Result<Self> {
        let n = config.len();
        if n > FALSIFIER_CAP {
            return Err(Error::TooLarge { n, cap: FALSIFIER_CAP });
        }
        let d = config.dim();
        let mut sums = Vec::with_capacity(d << n);
        let mut cur = vec![0.0; d];
        for v in config.vectors() {
            axpy(&mut cur, 1.0, v);
        }
        // Gray-code walk; the order of sums is irrelevant here.
        let mut gray = 0u64;
        for t in 0u64..1 << n {
            sums.extend_from_slice(&cur);
            let next = t + 1;
            if next == 1 << n {
                break;
            }
            let bit = next.trailing_zeros() as usize;
            gray ^= 1 << bit;
            let sign = if gray >> bit & 1 == 1 { -2.0 } else { 2.0 };
            axpy(&mut cur, sign, config.vector(bit));
        }
        Ok(SignedSums { dim: d, sums })
    }

    fn value(&self, config: &VectorConfig, lam: &[f64]) -> f64 {
        let mut p = vec![0.0; self.dim];
        for (v, &l) in config.vectors().iter().zip(lam) {
            axpy(&mut p, l, v);
        }
        self.sums
            .chunks_exact(self.dim)
            .map(|s| s.iter().zip(&p).map(|(a, b)| (a + b) * (a + b)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

/// The hypercube-centre step: coordinates of `y` in the orthonormal basis
/// nearest to `xs`, and the resulting inequalities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentreCheck {
    /// `|<y, e_i>|`.
    pub coordinates: Vec<f64>,
    pub coordinate_sum: f64,
    /// `1 + (9/2) epsilon^{1/4} d^4`.
    pub sum_target: f64,
    pub sum_target_met: bool,
    /// `sum (2 y_i - 1)^2`, the squared distance from the cube centre to `sum (2 y_i - 1) e_i`.
    pub centre_distance_sq: f64,
    /// `(sqrt(d - 6 epsilon^{1/4} d^3) - sqrt(36 epsilon^{1/2} d^7))^2`.
    pub centre_bound_sq: f64,
    pub centre_bound_met: bool,
}

pub fn hypercube_centre_check(xs: &[Vec<f64>], y: &[f64], epsilon: f64) -> Result<CentreCheck> {
    let d = xs.len();
    let delta = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .map(|(i, j)| dot(&xs[i], &xs[j]).abs())
        .fold(0.0, f64::max);
    let basis = nearest_orthonormal(xs, delta)?.basis;
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            index: d,
            expected: d,
            found: y.len(),
        });
    }
    let coordinates: Vec<f64> = basis.iter().map(|e| dot(y, e).abs()).collect();
    let df = d as f64;
    let e4 = epsilon.powf(0.25);
    let coordinate_sum: f64 = coordinates.iter().sum();
    let sum_target = 1.0 + 4.5 * e4 * df.powi(4);
    let centre_distance_sq: f64 = coordinates.iter().map(|c| (2.0 * c - 1.0).powi(2)).sum();
    let inner = (df - 6.0 * e4 * df.powi(3)).max(0.0).sqrt() - (36.0 * epsilon.sqrt() * df.powi(7)).sqrt();
    let centre_bound_sq = if inner > 0.0 { inner * inner } else { 0.0 };
    Ok(CentreCheck {
        coordinate_sum,
        sum_target,
        sum_target_met: coordinate_sum >= sum_target,
        centre_distance_sq,
        centre_bound_sq,
        centre_bound_met: centre_distance_sq <= centre_bound_sq,
        coordinates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_centre() {
        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let out = approximation_falsifier(&c, 2.0, 20, 1).unwrap();
        assert!(out.witness.is_none());
        assert!((out.best_value - 2.0).abs() < 1e-12);
        assert_eq!(out.best_start, 0);
        assert!(out.best_lambda.values().iter().all(|x| x.abs() < 1e-12));

        let out = approximation_falsifier(&c, 1.9, 20, 1).unwrap();
        let w = out.witness.unwrap();
        assert!(w.values().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn oblique_pair_is_stable() {
        let delta = 0.3f64;
        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![delta, (1.0 - delta * delta).sqrt()]]).unwrap();
        let out = approximation_falsifier(&c, 2.0 - delta * delta, 50, 3).unwrap();
        assert!(out.witness.is_none(), "{}", out.best_value);
    }

    #[test]
    fn value_matches_direct_minimum() {
        let c = VectorConfig::unit(vec![vec![0.6, 0.8], vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let l = CoefficientVector::new(vec![0.2, -0.7, 0.1]).unwrap();
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let mut s = [0.0; 2];
            for i in 0..3 {
                let eta = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                for r in 0..2 {
                    s[r] += (l.get(i) + eta) * c.vector(i)[r];
                }
            }
            best = best.min(s[0] * s[0] + s[1] * s[1]);
        }
        assert!((approximation_value(&c, &l).unwrap() - best).abs() < 1e-14);
    }

    #[test]
    fn deterministic() {
        let c = VectorConfig::unit(vec![vec![0.6, 0.8, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let a = approximation_falsifier(&c, 10.0, 16, 5).unwrap();
        let b = approximation_falsifier(&c, 10.0, 16, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn centre_check_orthonormal_y() {
        let xs = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let s = 1.0 / 3f64.sqrt();
        let c = hypercube_centre_check(&xs, &[s, s, s], 1e-20).unwrap();
        assert!((c.coordinate_sum - 3f64.sqrt()).abs() < 1e-12);
        assert!(c.sum_target_met);
        assert!(c.centre_bound_met);
    }
}
