use nalgebra::DMatrix;

use crate::config::{CoefficientVector, VectorConfig};
use crate::error::{Error, Result};

/// Largest accepted `||M x||` for a computed null vector.
pub const NULLSPACE_RESIDUAL_LIMIT: f64 = 1e-8;

/// Coordinates this close to `+-1` after a step are snapped onto the boundary.
const SNAP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationResult {
    pub coefficients: CoefficientVector,
    /// `fixed_mask[i]` is true when elimination drove coordinate `i` to `+-1`.
    pub fixed_mask: Vec<bool>,
    /// Eligible indices still fractional at the end, ascending.
    pub residual_indices: Vec<usize>,
}

/// Moves `lambda` along null combinations of the vectors, fixing one
/// coordinate to `+-1` per round, until at most `k` coordinates are fractional.
/// `sum lambda_i v_i` is preserved.
pub fn eliminate(config: &VectorConfig, lambda: &CoefficientVector, k: usize) -> Result<EliminationResult> {
    let all: Vec<usize> = (0..config.len()).collect();
    eliminate_subset(config, lambda, k, &all)
}

/// As [`eliminate`], touching only the coordinates listed in `eligible`.
pub fn eliminate_subset(
    config: &VectorConfig,
    lambda: &CoefficientVector,
    k: usize,
    eligible: &[usize],
) -> Result<EliminationResult> {
    let d = config.dim();
    if k < d {
        return Err(Error::InvalidParameter(format!("elimination target k = {k} is below d = {d}")));
    }
    if lambda.len() != config.len() {
        return Err(Error::LengthMismatch {
            expected: config.len(),
            found: lambda.len(),
        });
    }
    let mut eligible: Vec<usize> = eligible.to_vec();
    eligible.sort_unstable();
    eligible.dedup();
    if let Some(&bad) = eligible.iter().find(|&&i| i >= config.len()) {
        return Err(Error::InvalidParameter(format!("no vector at index {bad}")));
    }

    let mut lam = lambda.values().to_vec();
    let mut fixed_mask = vec![false; config.len()];
    let fractional = |lam: &[f64]| -> Vec<usize> { eligible.iter().copied().filter(|&i| lam[i].abs() != 1.0).collect() };

    loop {
        let frac = fractional(&lam);
        if frac.len() <= k {
            return Ok(EliminationResult {
                coefficients: CoefficientVector::new(lam)?,
                fixed_mask,
                residual_indices: frac,
            });
        }
        let chosen = &frac[..d + 1];
        let x = null_vector(config, chosen)?;

        // Smallest step in either direction that pushes a coordinate onto the boundary.
        let mut best_pos: Option<(f64, usize)> = None;
        let mut best_neg: Option<(f64, usize)> = None;
        for (t, &i) in chosen.iter().enumerate() {
            if x[t] == 0.0 {
                continue;
            }
            for target in [1.0, -1.0] {
                let g = (target - lam[i]) / x[t];
                if g > 0.0 && best_pos.is_none_or(|(b, _)| g < b) {
                    best_pos = Some((g, t));
                }
                if g < 0.0 && best_neg.is_none_or(|(b, _)| g > b) {
                    best_neg = Some((g, t));
                }
            }
        }
        let (gamma, hit) = match (best_pos, best_neg) {
            (Some(p), Some(n)) => {
                if -n.0 < p.0 {
                    n
                } else {
                    p
                }
            }
            (Some(p), None) => p,
            (None, Some(n)) => n,
            (None, None) => return Err(Error::NumericalNullspaceFailure(f64::NAN)),
        };
        for (t, &i) in chosen.iter().enumerate() {
            lam[i] = (lam[i] + gamma * x[t]).clamp(-1.0, 1.0);
        }
        let h = chosen[hit];
        lam[h] = if lam[h] >= 0.0 { 1.0 } else { -1.0 };
        for &i in chosen {
            if (lam[i].abs() - 1.0).abs() <= SNAP {
                lam[i] = lam[i].signum();
                fixed_mask[i] = true;
            }
        }
    }
}

/// Unit null vector of the `d x (d+1)` matrix with columns `v_i, i in chosen`,
/// signed so its first nonzero entry is positive.
fn null_vector(config: &VectorConfig, chosen: &[usize]) -> Result<Vec<f64>> {
    let d = config.dim();
    let m = chosen.len();
    // Pad with a zero row so the SVD is square and yields a full set of right singular vectors.
    let a = DMatrix::from_fn(m, m, |r, c| if r < d { config.vector(chosen[c])[r] } else { 0.0 });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let mut x: Vec<f64> = v_t
        .row(idx)
        .iter()
        .map(|&v| if v.abs() < 1e-15 { 0.0 } else { v })
        .collect();
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let residual = (0..d)
        .map(|r| {
            let row: f64 = chosen.iter().zip(&x).map(|(&i, xi)| config.vector(i)[r] * xi).sum();
            row * row
        })
        .sum::<f64>()
        .sqrt();
    if !(residual <= NULLSPACE_RESIDUAL_LIMIT) {
        return Err(Error::NumericalNullspaceFailure(residual));
    }
    Ok(x)
}
