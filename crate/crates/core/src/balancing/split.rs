use crate::config::{axpy, dot, validate_config, CoefficientVector, NormMode, SignAssignment, VectorConfig};
use crate::error::{Error, Result};
use crate::geometry::{is_oblique, project_onto_plane, PlaneBasis};

use super::greedy::approximate_point;
use super::BalanceReport;

/// Rounds `lambda` using the oblique pair `(u, w) = (v_ui, v_wi)` for the
/// component in their plane `P` and the remaining vectors, projected to
/// `P^perp`, for the rest.
///
/// Guarantee `sqrt(d - 2 + (sqrt(2 - zeta^{1/2}) + 4 m zeta^{3/4})^2)` with `m`
/// the number of remaining vectors.
pub fn projection_split(
    config: &VectorConfig,
    ui: usize,
    wi: usize,
    lambda: &CoefficientVector,
    zeta: f64,
) -> Result<BalanceReport> {
    let (n, d) = (config.len(), config.dim());
    if ui >= n || wi >= n || ui == wi {
        return Err(Error::InvalidParameter(format!("invalid pair ({ui}, {wi})")));
    }
    if lambda.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(Error::OutOfRange {
            name: "zeta",
            value: zeta,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let alpha = zeta.powf(0.25);
    let inner = config.inner(ui, wi);
    if !is_oblique(inner, alpha) {
        return Err(Error::NotOblique { inner, alpha });
    }
    let plane = PlaneBasis::new(config.vector(ui).to_vec(), config.vector(wi).to_vec())?;
    let others: Vec<usize> = (0..n).filter(|&i| i != ui && i != wi).collect();
    let bound = 2.0 * zeta.powf(0.75);

    let mut in_plane = Vec::with_capacity(others.len());
    let mut perp = Vec::with_capacity(others.len());
    for &i in &others {
        let (z, p) = project_onto_plane(config.vector(i), &plane)?;
        let length = dot(&z, &z).sqrt();
        if length > bound {
            return Err(Error::ProjectionTooLong { index: i, length, bound });
        }
        in_plane.push(z);
        perp.push(p);
    }

    // Signs for the others from their projections, in coordinates of P^perp.
    let mut signs = vec![1i8; n];
    if !others.is_empty() && d > 2 {
        let basis = plane.complement_basis();
        let coords: Vec<Vec<f64>> = perp.iter().map(|p| basis.iter().map(|b| dot(p, b)).collect()).collect();
        let projected = validate_config(coords, NormMode::Beck, 1e-9)?;
        let sub_lambda = CoefficientVector::new(others.iter().map(|&i| lambda.get(i)).collect())?;
        let sub = approximate_point(&projected, &sub_lambda)?;
        for (t, &i) in others.iter().enumerate() {
            signs[i] = sub.signs.get(t);
        }
    }

    // The others leave a residue t in P; pick the pair signs against it.
    let mut t = vec![0.0; d];
    for (k, &i) in others.iter().enumerate() {
        axpy(&mut t, lambda.get(i) + signs[i] as f64, &in_plane[k]);
    }
    let (lu, lw) = (lambda.get(ui), lambda.get(wi));
    let mut best: Option<(f64, i8, i8)> = None;
    for su in [1i8, -1] {
        for sw in [1i8, -1] {
            let mut e = t.clone();
            axpy(&mut e, lu + su as f64, plane.u());
            axpy(&mut e, lw + sw as f64, plane.w());
            let q = dot(&e, &e);
            if best.is_none_or(|(b, _, _)| q < b) {
                best = Some((q, su, sw));
            }
        }
    }
    let (_, su, sw) = best.expect("four candidates");
    signs[ui] = su;
    signs[wi] = sw;

    let m = others.len() as f64;
    let in_plane_bound = (2.0 - zeta.sqrt()).sqrt() + 2.0 * m * bound;
    let guarantee = ((d as f64 - 2.0).max(0.0) + in_plane_bound * in_plane_bound).sqrt();
    BalanceReport::measure("projection_split", config, lambda, SignAssignment::new(signs)?, guarantee)
}
