//! Adversarial search for configurations whose every signed sum is long.
//!
//! The objective `f(V) = min_eta ||sum eta_i v_i||` is maximized by random
//! restart hill climbing on the product of unit spheres. One vector moves per
//! step, so the cached signed sums are updated in place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{dot, validate_config, NormMode, VectorConfig, DEFAULT_NORM_TOLERANCE};
use crate::constructions::{construct_orthonormal_multiplicity, random_unit_vector};
use crate::enumerate::{min_signed_norm, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::precision::PrecisionPolicy;

/// Slack above `sqrt(d - 1)` that flags a counterexample candidate.
pub const COUNTEREXAMPLE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSpec {
    pub d: usize,
    pub n: usize,
    pub restarts: usize,
    pub steps: usize,
    /// Perturbation scale at step 0.
    pub initial_step: f64,
    /// Per-step multiplicative decay of the perturbation scale.
    pub decay: f64,
    pub seed: u64,
    /// A restart stops as soon as its value exceeds this.
    pub target: Option<f64>,
}

impl SearchSpec {
    /// Defaults tuned so the step shrinks from `0.5` to about `1e-6` over `steps`.
    pub fn new(d: usize, n: usize, restarts: usize, steps: usize, seed: u64) -> Self {
        let steps_f = steps.max(1) as f64;
        SearchSpec {
            d,
            n,
            restarts,
            steps,
            initial_step: 0.5,
            decay: (2e-6f64).powf(1.0 / steps_f),
            seed,
            target: None,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::ZeroDimension);
        }
        if self.n == 0 {
            return Err(Error::EmptyConfig);
        }
        if self.n > DEFAULT_ENUMERATION_CAP {
            return Err(Error::TooLarge {
                n: self.n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        if self.restarts == 0 || self.steps == 0 {
            return Err(Error::InvalidParameter("restarts and steps must be at least 1".into()));
        }
        if !(self.initial_step > 0.0 && self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidParameter(
                "step size must be positive and decay in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_config: VectorConfig,
    /// Exact `min_signed_norm(best_config)`.
    pub best_value: f64,
    pub best_restart: usize,
    /// Per restart, the running best after each improvement.
    pub history: Vec<Vec<f64>>,
    pub exceeded_target: bool,
    /// `n` and `d` differ in parity and `best_value > sqrt(d - 1) + 1e-6`.
    pub counterexample_candidate: bool,
}

/// Hill climbing with independent seeded restarts; the best restart is
/// re-verified by exact enumeration.
pub fn maximize_min_norm(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let runs: Vec<Restart> = (0..spec.restarts)
        .into_par_iter()
        .map(|r| climb(spec, r))
        .collect();
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .reduce(|a, b| if b.1.best_value > a.1.best_value { b } else { a })
        .expect("restarts >= 1");
    let best_config = validate_config(best.best_vectors.clone(), NormMode::Strict, DEFAULT_NORM_TOLERANCE)?;
    let (exact, _) = min_signed_norm(&best_config, &PrecisionPolicy::double())?;
    let best_value = exact;
    let d = spec.d as f64;
    Ok(SearchResult {
        best_config,
        best_value,
        best_restart,
        exceeded_target: spec.target.is_some_and(|t| best_value > t),
        counterexample_candidate: spec.n % 2 != spec.d % 2 && best_value > (d - 1.0).sqrt() + COUNTEREXAMPLE_SLACK,
        history: runs.into_iter().map(|r| r.history).collect(),
    })
}

struct Restart {
    best_value: f64,
    best_vectors: Vec<Vec<f64>>,
    history: Vec<f64>,
}

fn climb(spec: &SearchSpec, restart: usize) -> Restart {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(restart as u64);
    let (d, n) = (spec.d, spec.n);
    let mut vectors: Vec<Vec<f64>> = (0..n).map(|_| random_unit_vector(d, &mut rng)).collect();
    let mut sums = SumCache::new(&vectors);
    let mut value = sums.min_sq();
    let mut best_value = value;
    let mut best_vectors = vectors.clone();
    let mut history = vec![value.sqrt()];
    let mut sigma = spec.initial_step;
    let mut delta = vec![0.0; d];

    for _ in 0..spec.steps {
        if spec.target.is_some_and(|t| best_value.sqrt() > t) {
            break;
        }
        let j = rng.gen_range(0..n);
        let proposal: Vec<f64> = {
            let raw: Vec<f64> = vectors[j]
                .iter()
                .map(|x| x + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = dot(&raw, &raw).sqrt();
            if norm < 1e-12 {
                sigma *= spec.decay;
                continue;
            }
            raw.into_iter().map(|x| x / norm).collect()
        };
        for ((dl, p), v) in delta.iter_mut().zip(&proposal).zip(&vectors[j]) {
            *dl = p - v;
        }
        let candidate = sums.min_sq_after(j, &delta);
        let accept = candidate > value || (candidate == value && rng.gen::<bool>());
        if accept {
            sums.apply(j, &delta);
            vectors[j] = proposal;
            value = candidate;
            if value > best_value {
                best_value = value;
                best_vectors.clone_from(&vectors);
                history.push(value.sqrt());
            }
        }
        sigma *= spec.decay;
    }
    Restart {
        best_value: best_value.sqrt(),
        best_vectors,
        history,
    }
}

/// The `2^{n-1}` signed sums with `eta_0 = +1`; the others are their negatives.
struct SumCache {
    n: usize,
    d: usize,
    sums: Vec<f64>,
}

impl SumCache {
    fn new(vectors: &[Vec<f64>]) -> Self {
        let n = vectors.len();
        let d = vectors[0].len();
        let count = 1usize << (n - 1);
        let mut sums = vec![0.0; count * d];
        for m in 0..count {
            let s = &mut sums[m * d..(m + 1) * d];
            for (i, v) in vectors.iter().enumerate() {
                let sign = Self::sign(m, i);
                for (a, b) in s.iter_mut().zip(v) {
                    *a += sign * b;
                }
            }
        }
        SumCache { n, d, sums }
    }

    /// Sign of vector `i` in cached sum `m`; bit `i - 1` of `m` set means `-1`.
    fn sign(m: usize, i: usize) -> f64 {
        if i > 0 && m >> (i - 1) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn min_sq(&self) -> f64 {
        self.sums
            .chunks_exact(self.d)
            .map(|s| dot(s, s))
            .fold(f64::INFINITY, f64::min)
    }

    fn min_sq_after(&self, j: usize, delta: &[f64]) -> f64 {
        self.sums
            .chunks_exact(self.d)
            .enumerate()
            .map(|(m, s)| {
                let sign = Self::sign(m, j);
                s.iter().zip(delta).map(|(a, b)| (a + sign * b).powi(2)).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn apply(&mut self, j: usize, delta: &[f64]) {
        debug_assert!(j < self.n);
        for (m, s) in self.sums.chunks_exact_mut(self.d).enumerate() {
            let sign = Self::sign(m, j);
            for (a, b) in s.iter_mut().zip(delta) {
                *a += sign * b;
            }
        }
    }
}

/// One row of [`parity_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub n: usize,
    /// `same` when `n = d (mod 2)`, else `opposite`.
    pub parity: &'static str,
    /// The larger of the search value and the structured baseline.
    pub best_value: f64,
    pub search_value: f64,
    /// Odd multiplicities of an orthonormal basis, when `n >= d` and the parities match.
    pub baseline_value: Option<f64>,
    pub sqrt_d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub d_max: usize,
    pub n_max: usize,
    /// Each seed runs a full search; the best is kept.
    pub seeds: Vec<u64>,
    pub restarts: usize,
    pub steps: usize,
}

/// For every `1 <= d <= d_max`, `1 <= n <= n_max`, the best `min_signed_norm` found.
pub fn parity_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.n_max > DEFAULT_ENUMERATION_CAP {
        return Err(Error::TooLarge {
            n: spec.n_max,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    if spec.seeds.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one seed".into()));
    }
    let mut rows = Vec::new();
    for d in 1..=spec.d_max {
        for n in 1..=spec.n_max {
            let mut search_value = 0.0f64;
            for &seed in &spec.seeds {
                let r = maximize_min_norm(&SearchSpec::new(d, n, spec.restarts, spec.steps, seed))?;
                search_value = search_value.max(r.best_value);
            }
            let same = n % 2 == d % 2;
            let baseline_value = if same && n >= d {
                let mut m = vec![1usize; d];
                m[0] += n - d;
                let cfg = construct_orthonormal_multiplicity(d, &m)?;
                Some(min_signed_norm(&cfg, &PrecisionPolicy::double())?.0)
            } else {
                None
            };
            rows.push(SweepRow {
                d,
                n,
                parity: if same { "same" } else { "opposite" },
                best_value: search_value.max(baseline_value.unwrap_or(0.0)),
                search_value,
                baseline_value,
                sqrt_d: (d as f64).sqrt(),
            });
        }
    }
    Ok(rows)
}
