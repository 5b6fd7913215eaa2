//! Sign-selection algorithms with per-call guarantees.
//!
//! Every balancer returns a [`BalanceReport`] carrying the signs it chose, the
//! norm they achieve against the target, and the bound the algorithm promises.
//! The error measured everywhere is `||sum_i (lambda_i + eta_i) v_i||`.

mod cluster;
mod eliminate;
mod falsifier;
mod greedy;
mod parity;
mod split;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cluster::{cluster_and_pair, cluster_vectors, Clustering, CLUSTER_ZETA_LIMIT};
pub use eliminate::{eliminate, eliminate_subset, EliminationResult, NULLSPACE_RESIDUAL_LIMIT};
pub use falsifier::{
    approximation_falsifier, approximation_falsifier_with, approximation_value, hypercube_centre_check, CentreCheck,
    FalsifierOutcome, FalsifierSettings, FALSIFIER_CAP,
};
pub use greedy::{approximate_point, greedy_in_order, greedy_signs, GreedyTrace};
pub use parity::{default_epsilon, parity_balance, parity_balance_with, zeta_for, ParityParams};
pub use split::projection_split;

use crate::config::{dot, rounding_error, CoefficientVector, SignAssignment, VectorConfig};
use crate::error::Result;

/// Slack allowed between an achieved norm and its guarantee.
pub const GUARANTEE_SLACK: f64 = 1e-9;

/// Which branch of the parity balancer produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTaken {
    Oblique,
    Clustered,
    Fallback,
}

impl fmt::Display for CaseTaken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTaken::Oblique => "oblique",
            CaseTaken::Clustered => "clustered",
            CaseTaken::Fallback => "fallback",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub algorithm: String,
    pub signs: SignAssignment,
    pub achieved_norm: f64,
    pub guarantee: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_taken: Option<CaseTaken>,
}

impl BalanceReport {
    pub(crate) fn measure(
        algorithm: impl Into<String>,
        config: &VectorConfig,
        lambda: &CoefficientVector,
        signs: SignAssignment,
        guarantee: f64,
    ) -> Result<Self> {
        let err = rounding_error(config, lambda, &signs)?;
        Ok(BalanceReport {
            algorithm: algorithm.into(),
            signs,
            achieved_norm: dot(&err, &err).sqrt(),
            guarantee,
            case_taken: None,
        })
    }

    pub fn with_case(mut self, case: CaseTaken) -> Self {
        self.case_taken = Some(case);
        self
    }

    /// `achieved_norm <= guarantee + 1e-9`.
    pub fn meets_guarantee(&self) -> bool {
        self.achieved_norm <= self.guarantee + GUARANTEE_SLACK
    }
}

/// First pair `(i, j)` in lexicographic order with `|<v_i, v_j>|` in `(alpha, 1 - alpha)`.
pub fn detect_oblique(config: &VectorConfig, alpha: f64) -> Option<(usize, usize, f64)> {
    let n = config.len();
    for i in 0..n {
        for j in i + 1..n {
            let inner = config.inner(i, j);
            if crate::geometry::is_oblique(inner, alpha) {
                return Some((i, j, inner));
            }
        }
    }
    None
}
