use crate::config::{axpy, dot, CoefficientVector, SignAssignment, VectorConfig};
use crate::error::{Error, Result};

use super::eliminate::eliminate;
use super::BalanceReport;

/// Signs chosen by a greedy pass together with `||s_m||^2` after each step.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub signs: SignAssignment,
    /// `prefix_sq[m]` is `||s_{m+1}||^2`, in processing order.
    pub prefix_sq: Vec<f64>,
}

/// Processes `order` one index at a time, picking the sign that keeps
/// `s = sum (lambda_i + eta_i) v_i` shortest; ties go to `+1`.
///
/// Indices not in `order` get `eta_i = -lambda_i` if that is a sign, else `+1`,
/// and `start` is the contribution already accumulated from them.
pub fn greedy_in_order(
    config: &VectorConfig,
    lambda: &CoefficientVector,
    order: &[usize],
    start: Option<&[f64]>,
) -> Result<GreedyTrace> {
    if lambda.len() != config.len() {
        return Err(Error::LengthMismatch {
            expected: config.len(),
            found: lambda.len(),
        });
    }
    let mut signs: Vec<i8> = lambda
        .values()
        .iter()
        .map(|&l| if l == 1.0 { -1 } else { 1 })
        .collect();
    let mut s = start.map_or_else(|| vec![0.0; config.dim()], <[f64]>::to_vec);
    let mut prefix_sq = Vec::with_capacity(order.len());
    let mut plus = vec![0.0; config.dim()];
    let mut minus = vec![0.0; config.dim()];
    for &i in order {
        let v = config.vector(i);
        let l = lambda.get(i);
        plus.copy_from_slice(&s);
        axpy(&mut plus, l + 1.0, v);
        minus.copy_from_slice(&s);
        axpy(&mut minus, l - 1.0, v);
        let (qp, qm) = (dot(&plus, &plus), dot(&minus, &minus));
        if qp <= qm {
            signs[i] = 1;
            std::mem::swap(&mut s, &mut plus);
            prefix_sq.push(qp);
        } else {
            signs[i] = -1;
            std::mem::swap(&mut s, &mut minus);
            prefix_sq.push(qm);
        }
    }
    Ok(GreedyTrace {
        signs: SignAssignment::new(signs)?,
        prefix_sq,
    })
}

/// Greedy rounding in index order. Guarantee `sqrt(n)`.
pub fn greedy_signs(config: &VectorConfig, lambda: &CoefficientVector) -> Result<BalanceReport> {
    let order: Vec<usize> = (0..config.len()).collect();
    let trace = greedy_in_order(config, lambda, &order, None)?;
    BalanceReport::measure("greedy", config, lambda, trace.signs, (config.len() as f64).sqrt())
}

/// Elimination down to at most `d` fractional coefficients, then greedy
/// rounding of the rest in order of decreasing `|lambda'_i|`.
///
/// Guarantee `sqrt(min(n, d))`.
pub fn approximate_point(config: &VectorConfig, lambda: &CoefficientVector) -> Result<BalanceReport> {
    let d = config.dim();
    let elim = eliminate(config, lambda, d)?;
    let reduced = &elim.coefficients;
    let mut order = elim.residual_indices.clone();
    order.sort_by(|&a, &b| reduced.get(b).abs().total_cmp(&reduced.get(a).abs()).then(a.cmp(&b)));
    let trace = greedy_in_order(config, reduced, &order, None)?;
    let guarantee = (config.len().min(d) as f64).sqrt();
    BalanceReport::measure("approximate_point", config, lambda, trace.signs, guarantee)
}
