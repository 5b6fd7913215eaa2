use crate::config::{axpy, dot, validate_config, CoefficientVector, NormMode, SignAssignment, VectorConfig};
use crate::error::{Error, Result};

use super::greedy::{approximate_point, greedy_in_order};
use super::{detect_oblique, BalanceReport};

/// Largest `zeta` for which near-parallelism is transitive.
pub const CLUSTER_ZETA_LIMIT: f64 = 0.0016;

/// Partition of the indices into near-parallel classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub clusters: Vec<Vec<usize>>,
    /// `representatives[c]` is the first index of cluster `c`.
    pub representatives: Vec<usize>,
    /// `orientation[i] * v_i` points the same way as its representative.
    pub orientation: Vec<i8>,
}

/// Groups vectors by `|<x, y>| >= 1 - zeta^{1/4}`.
pub fn cluster_vectors(config: &VectorConfig, zeta: f64) -> Result<Clustering> {
    if !(zeta > 0.0 && zeta <= CLUSTER_ZETA_LIMIT) {
        return Err(Error::OutOfRange {
            name: "zeta",
            value: zeta,
            lo: 0.0,
            hi: CLUSTER_ZETA_LIMIT,
        });
    }
    let t = zeta.powf(0.25);
    if let Some((i, j, inner)) = detect_oblique(config, t) {
        return Err(Error::ObliquePairPresent { i, j, inner });
    }
    let n = config.len();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut representatives: Vec<usize> = Vec::new();
    let mut orientation = vec![1i8; n];
    for i in 0..n {
        let home = representatives
            .iter()
            .position(|&r| config.inner(i, r).abs() >= 1.0 - t);
        match home {
            Some(c) => {
                let r = representatives[c];
                orientation[i] = if config.inner(i, r) >= 0.0 { 1 } else { -1 };
                clusters[c].push(i);
            }
            None => {
                representatives.push(i);
                clusters.push(vec![i]);
            }
        }
    }
    for (c, members) in clusters.iter().enumerate() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let oriented = orientation[i] as f64 * orientation[j] as f64 * config.inner(i, j);
                if oriented < 1.0 - t {
                    return Err(Error::TransitivityViolation {
                        i,
                        j,
                        k: representatives[c],
                    });
                }
            }
        }
    }
    if clusters.len() > config.dim() {
        return Err(Error::TooManyClusters {
            count: clusters.len(),
            dim: config.dim(),
        });
    }
    Ok(Clustering {
        clusters,
        representatives,
        orientation,
    })
}

/// Opposite signs within matched pairs of each cluster, greedy signs on the
/// leftovers, and the better relative sign between the two parts.
///
/// Guarantee `sqrt(max(d - 1 + 2 zeta d, c))` where `c` bounds `||x_L||^2 + ||x_S||^2`
/// from the actual leftover count and short-vector lengths.
pub fn cluster_and_pair(config: &VectorConfig, zeta: f64) -> Result<BalanceReport> {
    let (n, d) = (config.len(), config.dim());
    if n % 2 == d % 2 {
        return Err(Error::ParityMismatch { n, d });
    }
    let clustering = cluster_vectors(config, zeta)?;
    let o = &clustering.orientation;

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut leftovers: Vec<usize> = Vec::new();
    for members in &clustering.clusters {
        for chunk in members.chunks(2) {
            match *chunk {
                [a, b] => pairs.push((a, b)),
                [a] => leftovers.push(a),
                _ => unreachable!(),
            }
        }
    }

    // Long part: oriented leftovers, greedily signed.
    let long_raw: Vec<Vec<f64>> = leftovers
        .iter()
        .map(|&i| config.vector(i).iter().map(|x| o[i] as f64 * x).collect())
        .collect();
    let (long_signs, x_l) = signed_part(&long_raw, d, false)?;

    // Short part: o_a v_a - o_b v_b per pair.
    let short_raw: Vec<Vec<f64>> = pairs
        .iter()
        .map(|&(a, b)| {
            let (va, vb) = (config.vector(a), config.vector(b));
            (0..d).map(|r| o[a] as f64 * va[r] - o[b] as f64 * vb[r]).collect()
        })
        .collect();
    let (short_signs, x_s) = signed_part(&short_raw, d, true)?;

    let rho = {
        let mut plus = x_l.clone();
        axpy(&mut plus, 1.0, &x_s);
        let mut minus = x_l.clone();
        axpy(&mut minus, -1.0, &x_s);
        if dot(&plus, &plus) <= dot(&minus, &minus) {
            1i8
        } else {
            -1
        }
    };

    let mut signs = vec![1i8; n];
    for (t, &i) in leftovers.iter().enumerate() {
        signs[i] = long_signs[t] * o[i];
    }
    for (t, &(a, b)) in pairs.iter().enumerate() {
        let s = rho * short_signs[t];
        signs[a] = s * o[a];
        signs[b] = -s * o[b];
    }

    let short_sq: Vec<f64> = short_raw.iter().map(|s| dot(s, s)).collect();
    let sum_sq: f64 = short_sq.iter().sum();
    let max_sq = short_sq.iter().copied().fold(0.0, f64::max);
    let certified = leftovers.len().min(d) as f64 + sum_sq.min(pairs.len().min(d) as f64 * max_sq);
    let structural = d as f64 - 1.0 + 2.0 * zeta * d as f64;
    BalanceReport::measure(
        "cluster_and_pair",
        config,
        &CoefficientVector::zeros(n),
        SignAssignment::new(signs)?,
        structural.max(certified).sqrt(),
    )
}

/// Signs for `vectors` (all of norm at most one after scaling) with small
/// signed sum, and that sum. With `scaled`, the better of greedy and
/// elimination-based rounding is used.
fn signed_part(vectors: &[Vec<f64>], d: usize, scaled: bool) -> Result<(Vec<i8>, Vec<f64>)> {
    if vectors.is_empty() {
        return Ok((Vec::new(), vec![0.0; d]));
    }
    let scale = vectors.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok((vec![1; vectors.len()], vec![0.0; d]));
    }
    let normalized: Vec<Vec<f64>> = vectors.iter().map(|v| v.iter().map(|x| x / scale).collect()).collect();
    let cfg = validate_config(normalized, NormMode::Beck, 1e-9)?;
    let zeros = CoefficientVector::zeros(vectors.len());
    let order: Vec<usize> = (0..vectors.len()).collect();
    let mut signs = greedy_in_order(&cfg, &zeros, &order, None)?.signs;
    if scaled {
        let alt = approximate_point(&cfg, &zeros)?.signs;
        if sum_sq(vectors, alt.signs()) < sum_sq(vectors, signs.signs()) {
            signs = alt;
        }
    }
    let s = signs.signs().to_vec();
    let total = signed(vectors, &s, d);
    Ok((s, total))
}

fn signed(vectors: &[Vec<f64>], signs: &[i8], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for (v, &s) in vectors.iter().zip(signs) {
        axpy(&mut out, s as f64, v);
    }
    out
}

fn sum_sq(vectors: &[Vec<f64>], signs: &[i8]) -> f64 {
    let d = vectors.first().map_or(0, Vec::len);
    let s = signed(vectors, signs, d);
    dot(&s, &s)
}
