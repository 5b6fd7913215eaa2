use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CoefficientVector, SignAssignment, VectorConfig};
use crate::enumerate::min_signed_norm;
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

use super::cluster::{cluster_and_pair, CLUSTER_ZETA_LIMIT};
use super::eliminate::eliminate_subset;
use super::greedy::{approximate_point, greedy_in_order};
use super::split::projection_split;
use super::{detect_oblique, BalanceReport, CaseTaken};

/// Largest `n` for which the portfolio also runs exhaustive search.
const EXACT_PORTFOLIO_LIMIT: usize = 16;

/// `2^{-100} d^{-80}`.
pub fn default_epsilon(d: usize) -> f64 {
    2f64.powi(-100) * (d as f64).powi(-80)
}

/// `18 epsilon^{1/4} d^4`.
pub fn zeta_for(epsilon: f64, d: usize) -> f64 {
    18.0 * epsilon.powf(0.25) * (d as f64).powi(4)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityParams {
    /// The contractual improvement over `d`.
    pub epsilon: f64,
    /// Obliqueness scale; pairs are oblique when `|<u, w>|` lies in `(zeta^{1/4}, 1 - zeta^{1/4})`.
    pub zeta: f64,
    /// Number of shuffled greedy passes in the portfolio.
    pub random_orders: usize,
    pub seed: u64,
}

impl ParityParams {
    pub fn default_for(d: usize) -> Self {
        let epsilon = default_epsilon(d);
        ParityParams {
            epsilon,
            zeta: zeta_for(epsilon, d),
            random_orders: 32,
            seed: 0,
        }
    }

    /// Experiment setting with `zeta` derived from `epsilon`.
    pub fn with_epsilon(d: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(ParityParams {
            epsilon,
            zeta: zeta_for(epsilon, d),
            ..ParityParams::default_for(d)
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Signs with norm below `sqrt(d)` whenever `n` and `d` differ in parity.
pub fn parity_balance(config: &VectorConfig) -> Result<BalanceReport> {
    parity_balance_with(config, &ParityParams::default_for(config.dim()))
}

/// Dispatches on parity and obliqueness:
///
/// * `n = d (mod 2)`: elimination plus greedy, guarantee `sqrt(d)`, tagged `fallback`;
/// * no oblique pair: cluster and pair, tagged `clustered`;
/// * otherwise the best of a portfolio, tagged `oblique` (or `fallback` when
///   clustering was not applicable).
///
/// The reported guarantee is `sqrt(d - max(epsilon, d - c))` with `c` the squared
/// bound certified by the branch that produced the signs.
pub fn parity_balance_with(config: &VectorConfig, params: &ParityParams) -> Result<BalanceReport> {
    let (n, d) = (config.len(), config.dim());
    let zeros = CoefficientVector::zeros(n);
    if n % 2 == d % 2 {
        let mut r = approximate_point(config, &zeros)?;
        r.algorithm = "parity_balance".into();
        r.guarantee = (d as f64).sqrt();
        return Ok(r.with_case(CaseTaken::Fallback));
    }

    let alpha = params.zeta.powf(0.25);
    let oblique = if alpha < 0.5 { detect_oblique(config, alpha) } else { None };
    if oblique.is_none() && params.zeta <= CLUSTER_ZETA_LIMIT {
        if let Ok(r) = cluster_and_pair(config, params.zeta) {
            return Ok(finish(r, d, params.epsilon, CaseTaken::Clustered));
        }
    }

    let case = if oblique.is_some() {
        CaseTaken::Oblique
    } else {
        CaseTaken::Fallback
    };
    let best = portfolio(config, oblique.map(|(i, j, _)| (i, j)), params)?;
    Ok(finish(best, d, params.epsilon, case))
}

fn finish(mut r: BalanceReport, d: usize, epsilon: f64, case: CaseTaken) -> BalanceReport {
    let df = d as f64;
    let certified_gain = df - r.guarantee * r.guarantee;
    r.guarantee = (df - epsilon.max(certified_gain)).sqrt();
    r.algorithm = format!("parity_balance/{}", r.algorithm);
    r.with_case(case)
}

/// Runs every applicable candidate and keeps the shortest, earliest on ties.
/// Each candidate's guarantee is its achieved norm, which its signs certify.
fn portfolio(config: &VectorConfig, pair: Option<(usize, usize)>, params: &ParityParams) -> Result<BalanceReport> {
    let n = config.len();
    let zeros = CoefficientVector::zeros(n);
    let mut candidates: Vec<BalanceReport> = Vec::new();

    let mut order: Vec<usize> = (0..n).collect();
    let natural = greedy_in_order(config, &zeros, &order, None)?;
    candidates.push(BalanceReport::measure("greedy", config, &zeros, natural.signs, f64::INFINITY)?);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.random_orders {
        order.shuffle(&mut rng);
        let t = greedy_in_order(config, &zeros, &order, None)?;
        candidates.push(BalanceReport::measure("greedy_shuffled", config, &zeros, t.signs, f64::INFINITY)?);
    }
    candidates.push(approximate_point(config, &zeros)?);
    if let Some((i, j)) = pair {
        if let Ok(r) = split_after_elimination(config, i, j, params.zeta) {
            candidates.push(r);
        }
    }
    if n <= EXACT_PORTFOLIO_LIMIT {
        let (_, signs) = min_signed_norm(config, &PrecisionPolicy::double())?;
        candidates.push(BalanceReport::measure("exhaustive", config, &zeros, signs, f64::INFINITY)?);
    }

    let mut best = candidates
        .into_iter()
        .reduce(|a, b| if b.achieved_norm < a.achieved_norm { b } else { a })
        .expect("portfolio is nonempty");
    best.guarantee = best.achieved_norm;
    Ok(best)
}

/// Reduces everything but the pair to at most `d` fractional coefficients,
/// then applies the projection split to the pair and the survivors.
fn split_after_elimination(config: &VectorConfig, i: usize, j: usize, zeta: f64) -> Result<BalanceReport> {
    let n = config.len();
    let d = config.dim();
    let zeros = CoefficientVector::zeros(n);
    let others: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    let elim = eliminate_subset(config, &zeros, d, &others)?;
    let mut keep = vec![i, j];
    keep.extend(&elim.residual_indices);
    let sub = config.select(&keep)?;
    let sub_lambda = CoefficientVector::new(keep.iter().map(|&k| elim.coefficients.get(k)).collect())?;
    let r = projection_split(&sub, 0, 1, &sub_lambda, zeta)?;

    let mut signs: Vec<i8> = elim.coefficients.values().iter().map(|&l| if l == 1.0 { -1 } else { 1 }).collect();
    for (t, &k) in keep.iter().enumerate() {
        signs[k] = r.signs.get(t);
    }
    BalanceReport::measure("projection_split", config, &zeros, SignAssignment::new(signs)?, r.guarantee)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_unit_config, tight_canonical};

    #[test]
    fn constants() {
        assert_eq!(default_epsilon(1), 2f64.powi(-100));
        let z = zeta_for(default_epsilon(3), 3);
        assert!(z > 0.0 && z < 1e-12, "{z}");
        assert!(zeta_for(1e-4, 3) > 1.0);
    }

    #[test]
    fn small_examples() {
        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = parity_balance(&c).unwrap();
        assert!((r.achieved_norm - 1.0).abs() < 1e-15);
        assert!(r.meets_guarantee());
        assert_eq!(r.case_taken, Some(CaseTaken::Clustered));

        let r = parity_balance(&tight_canonical()).unwrap();
        assert!((r.achieved_norm - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.meets_guarantee());
    }

    #[test]
    fn same_parity_falls_back() {
        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = parity_balance(&c).unwrap();
        assert_eq!(r.case_taken, Some(CaseTaken::Fallback));
        assert_eq!(r.guarantee, 2f64.sqrt());
    }

    #[test]
    fn oblique_portfolio_matches_exhaustive_minimum() {
        for seed in 0..20 {
            let c = random_unit_config(3, 4, seed).unwrap();
            let r = parity_balance(&c).unwrap();
            let (min, _) = min_signed_norm(&c, &PrecisionPolicy::double()).unwrap();
            assert_eq!(r.case_taken, Some(CaseTaken::Oblique));
            assert!((r.achieved_norm - min).abs() < 1e-12);
            assert!(r.meets_guarantee());
        }
    }
}
