//! Geometric primitives: the cosine fact, chord lengths, nearest orthonormal
//! bases and projections onto planes.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::config::dot;
use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-9;
const SINGULAR_THRESHOLD: f64 = 1e-12;

/// `||x - y||` for unit vectors with `<x, y> = 1 - delta`.
pub fn inner_to_distance(delta: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&delta) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            lo: 0.0,
            hi: 2.0,
        });
    }
    Ok((2.0 * delta).sqrt())
}

/// Inverse of [`inner_to_distance`]: the `delta` with `||x - y|| = distance`.
pub fn distance_to_inner(distance: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&distance) {
        return Err(Error::OutOfRange {
            name: "distance",
            value: distance,
            lo: 0.0,
            hi: 2.0,
        });
    }
    Ok(distance * distance / 2.0)
}

/// A line through a point at distance `sqrt(r^2 - a^2)` from the centre of a
/// circle of radius `r`, tilted by `theta` from the direction perpendicular to
/// the radius through that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordQuery {
    r: f64,
    a: f64,
    theta: f64,
}

impl ChordQuery {
    pub fn new(r: f64, a: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        if !(a > 0.0 && a < r) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                lo: 0.0,
                hi: r,
            });
        }
        let half = std::f64::consts::FRAC_PI_2;
        if !(-half..=half).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                lo: -half,
                hi: half,
            });
        }
        Ok(ChordQuery { r, a, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `2 sqrt(r^2 sin^2 theta + a^2 cos^2 theta)`; at least `2a`, with equality only at `theta = 0`.
pub fn chord_length(q: &ChordQuery) -> f64 {
    let (s, c) = q.theta.sin_cos();
    2.0 * (q.r * q.r * s * s + q.a * q.a * c * c).sqrt()
}

/// Output of [`nearest_orthonormal`].
#[derive(Debug, Clone)]
pub struct NearestBasis {
    /// `basis[i]` is the orthonormal vector paired with input `i`.
    pub basis: Vec<Vec<f64>>,
    /// `max_i ||x_i - e_i||`.
    pub max_distance: f64,
    /// `3 delta^{1/2} d`.
    pub bound: f64,
}

/// Orthonormal basis closest to `d` almost orthogonal unit vectors, via the
/// polar factor of their column matrix.
pub fn nearest_orthonormal(xs: &[Vec<f64>], delta: f64) -> Result<NearestBasis> {
    let d = xs.len();
    if d == 0 {
        return Err(Error::EmptyConfig);
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    for (i, x) in xs.iter().enumerate() {
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                index: i,
                expected: d,
                found: x.len(),
            });
        }
        let norm = dot(x, x).sqrt();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NormViolation {
                index: i,
                norm,
                mode: "strict",
                tolerance: UNIT_TOLERANCE,
            });
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let inner = dot(&xs[i], &xs[j]);
            if inner.abs() > delta + 1e-15 {
                return Err(Error::NotAlmostOrthogonal { i, j, inner, delta });
            }
        }
    }

    let x = DMatrix::from_fn(d, d, |r, c| xs[c][r]);
    let svd = x.clone().svd(true, true);
    let smallest = svd.singular_values.min();
    if smallest < SINGULAR_THRESHOLD {
        return Err(Error::SingularInput(smallest));
    }
    let polar = svd.u.expect("requested") * svd.v_t.expect("requested");
    let basis: Vec<Vec<f64>> = (0..d).map(|c| polar.column(c).iter().copied().collect()).collect();
    let max_distance = (0..d)
        .map(|c| (x.column(c) - polar.column(c)).norm())
        .fold(0.0, f64::max);
    Ok(NearestBasis {
        basis,
        max_distance,
        bound: 3.0 * delta.sqrt() * d as f64,
    })
}

/// Largest deviation of `basis` from orthonormality, `max |<e_i, e_j> - [i = j]|`.
pub fn orthonormality_residual(basis: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(a, b) - target).abs());
        }
    }
    worst
}

/// Two independent unit vectors spanning a plane `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneBasis {
    u: Vec<f64>,
    w: Vec<f64>,
    gram: f64,
}

impl PlaneBasis {
    pub fn new(u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if u.len() != w.len() {
            return Err(Error::DimensionMismatch {
                index: 1,
                expected: u.len(),
                found: w.len(),
            });
        }
        for (index, v) in [&u, &w].into_iter().enumerate() {
            let norm = dot(v, v).sqrt();
            if (norm - 1.0).abs() > UNIT_TOLERANCE {
                return Err(Error::NormViolation {
                    index,
                    norm,
                    mode: "strict",
                    tolerance: UNIT_TOLERANCE,
                });
            }
        }
        let gram = dot(&u, &w);
        if gram.abs() >= 1.0 - 1e-12 {
            return Err(Error::DegeneratePlane(gram.abs()));
        }
        Ok(PlaneBasis { u, w, gram })
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn gram(&self) -> f64 {
        self.gram
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// Coefficients `(a, b)` with `proj_P(y) = a u + b w`.
    pub fn coordinates(&self, y: &[f64]) -> (f64, f64) {
        let (p, q) = (dot(y, &self.u), dot(y, &self.w));
        let g = self.gram;
        let det = 1.0 - g * g;
        ((p - g * q) / det, (q - g * p) / det)
    }

    /// Orthonormal basis of `P^perp`, deterministic up to the sign convention
    /// that each vector's first nonzero entry is positive.
    pub fn complement_basis(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut proj = DMatrix::<f64>::identity(d, d);
        let w_perp = {
            let mut v: Vec<f64> = self.w.iter().zip(&self.u).map(|(w, u)| w - self.gram * u).collect();
            let n = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|x| *x /= n);
            v
        };
        for e in [&self.u, &w_perp] {
            let col = DVector::from_column_slice(e);
            proj -= &col * col.transpose();
        }
        let eig = SymmetricEigen::new(proj);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
        order
            .into_iter()
            .take(d.saturating_sub(2))
            .map(|k| {
                let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
                if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                    if *first < 0.0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                v
            })
            .collect()
    }
}

/// Splits `y` into its component in `P` and the orthogonal remainder.
pub fn project_onto_plane(y: &[f64], basis: &PlaneBasis) -> Result<(Vec<f64>, Vec<f64>)> {
    if y.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: basis.dim(),
            found: y.len(),
        });
    }
    let (a, b) = basis.coordinates(y);
    let z: Vec<f64> = basis.u.iter().zip(&basis.w).map(|(u, w)| a * u + b * w).collect();
    let perp = y.iter().zip(&z).map(|(y, z)| y - z).collect();
    Ok((z, perp))
}

/// Whether `|inner|` lies strictly inside `(alpha, 1 - alpha)`.
pub fn is_oblique(inner: f64, alpha: f64) -> bool {
    let x = inner.abs();
    x > alpha && x < 1.0 - alpha
}
