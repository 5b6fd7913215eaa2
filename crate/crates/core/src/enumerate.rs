//! Exhaustive enumeration of all `2^n` signed sums.
//!
//! The sign space is cut into `2^p` blocks by fixing the signs of the first
//! `p` vectors. Inside a block the remaining signs follow the reflected binary
//! Gray code, so consecutive assignments differ in one sign and the running
//! sum is updated with a single `+-2 v_j` in `O(d)`. Blocks run in parallel and
//! are merged in block order; the block layout does not depend on the number
//! of worker threads, so every field of the report is reproducible bit for bit.

use std::cmp::Ordering;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{SignAssignment, VectorConfig};
use crate::error::{Error, Result};
use crate::precision::{
    Arith, DoubleArith, ExtendedArith, IntervalArith, PrecisionMode, PrecisionPolicy, Verdict,
};

/// Largest `n` accepted by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 30;

/// Hard ceiling on any cap; masks are 64-bit.
pub const MAX_ENUMERATION_CAP: usize = 48;

/// Number of leading signs fixed per block.
const PREFIX_BITS: usize = 6;

/// The running sum is recomputed from scratch this often to bound drift.
const RESYNC_INTERVAL: u64 = 1024;

/// Exact counts of sign assignments by norm threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub n: usize,
    pub dim: usize,
    /// `2^n`.
    pub total: u64,
    /// Assignments with `||sum||^2 <= radius^2 + tolerance`.
    pub hits: u64,
    pub radius: f64,
    pub min_norm: f64,
    pub min_norm_decimal: String,
    /// Lexicographically smallest minimizer (`+1` before `-1`).
    pub argmin: SignAssignment,
    /// `min |‖sum‖^2 - radius^2|` over all assignments.
    pub margin: f64,
    pub margin_decimal: String,
    /// `radius^2 - max ‖sum‖^2` over hits (negative when a hit only passed
    /// because of the tolerance).
    pub hit_slack: Option<f64>,
    /// `min ‖sum‖^2 - radius^2` over misses.
    pub miss_gap: Option<f64>,
    pub miss_gap_decimal: Option<String>,
    pub precision: String,
    pub classification_tolerance: f64,
}

impl EnumerationReport {
    pub fn misses(&self) -> u64 {
        self.total - self.hits
    }

    /// `hits / total`, reduced.
    pub fn probability(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.total)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            dim: usize,
            total: u64,
            hits: u64,
            misses: u64,
            probability: String,
            radius: String,
            min_norm: &'a str,
            argmin: &'a SignAssignment,
            margin: &'a str,
            hit_slack: Option<String>,
            miss_gap: Option<&'a str>,
            precision: &'a str,
            classification_tolerance: String,
        }
        serde_json::to_value(Out {
            n: self.n,
            dim: self.dim,
            total: self.total,
            hits: self.hits,
            misses: self.misses(),
            probability: self.probability().to_string(),
            radius: format!("{:e}", self.radius),
            min_norm: &self.min_norm_decimal,
            argmin: &self.argmin,
            margin: &self.margin_decimal,
            hit_slack: self.hit_slack.map(|x| format!("{x:e}")),
            miss_gap: self.miss_gap_decimal.as_deref(),
            precision: &self.precision,
            classification_tolerance: format!("{:e}", self.classification_tolerance),
        })
        .expect("report serializes")
    }
}

/// Counts sign assignments within `radius` of the origin (closed ball).
pub fn enumerate(config: &VectorConfig, radius: f64, policy: &PrecisionPolicy) -> Result<EnumerationReport> {
    enumerate_with_cap(config, radius, policy, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_with_cap(
    config: &VectorConfig,
    radius: f64,
    policy: &PrecisionPolicy,
    cap: usize,
) -> Result<EnumerationReport> {
    check_size(config, cap)?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius(radius));
    }
    dispatch(config, policy, |engine| engine.report(radius, policy))
}

/// `min_eta ||sum eta_i v_i||` with its lexicographically smallest minimizer.
pub fn min_signed_norm(config: &VectorConfig, policy: &PrecisionPolicy) -> Result<(f64, SignAssignment)> {
    check_size(config, DEFAULT_ENUMERATION_CAP)?;
    dispatch(config, policy, |engine| Ok(engine.min_signed(policy.classification_tolerance)))
}

/// Masks of every assignment classified as a hit, in increasing order.
pub fn hit_masks(config: &VectorConfig, radius: f64, policy: &PrecisionPolicy) -> Result<Vec<u64>> {
    check_size(config, DEFAULT_ENUMERATION_CAP)?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius(radius));
    }
    dispatch(config, policy, |engine| engine.hit_masks(radius, policy))
}

/// Every squared signed-sum norm in `f64`, indexed by mask. Memory is `8 * 2^n` bytes.
pub fn all_squared_norms(config: &VectorConfig) -> Result<Vec<f64>> {
    check_size(config, 26)?;
    let engine = Engine::new(DoubleArith, load_f64(config));
    let blocks: Vec<Vec<(u64, f64)>> = (0..engine.num_blocks())
        .into_par_iter()
        .map(|b| {
            let mut out = Vec::with_capacity(1 << engine.suffix_bits);
            engine.walk_block(b, |mask, sq| out.push((mask, *sq)));
            out
        })
        .collect();
    let mut norms = vec![0.0; 1usize << config.len()];
    for (mask, sq) in blocks.into_iter().flatten() {
        norms[mask as usize] = sq;
    }
    Ok(norms)
}

fn check_size(config: &VectorConfig, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_ENUMERATION_CAP);
    if config.len() > cap {
        return Err(Error::TooLarge { n: config.len(), cap });
    }
    Ok(())
}

fn load_f64(config: &VectorConfig) -> Vec<Vec<f64>> {
    config.vectors().to_vec()
}

fn dispatch<T>(
    config: &VectorConfig,
    policy: &PrecisionPolicy,
    body: impl Fn(&dyn EngineOps) -> Result<T>,
) -> Result<T> {
    match policy.mode {
        PrecisionMode::Double => body(&Engine::new(DoubleArith, load_f64(config))),
        PrecisionMode::Interval => {
            let ia = IntervalArith;
            let vecs = config
                .vectors()
                .iter()
                .map(|v| v.iter().map(|&x| ia.from_f64(x)).collect())
                .collect();
            body(&Engine::new(ia, vecs))
        }
        PrecisionMode::Extended { bits } => {
            let ea = ExtendedArith { bits };
            let vecs = match config.decimal_coordinates() {
                Some(rows) => rows
                    .iter()
                    .map(|row| {
                        let items: Vec<&str> = row.iter().map(String::as_str).collect();
                        ea.parse_all(&items)
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => config
                    .vectors()
                    .iter()
                    .map(|v| v.iter().map(|&x| ea.from_f64(x)).collect())
                    .collect(),
            };
            body(&Engine::new(ea, vecs))
        }
    }
}

/// Object-safe view of an engine, so callers need not be generic over the backend.
trait EngineOps {
    fn report(&self, radius: f64, policy: &PrecisionPolicy) -> Result<EnumerationReport>;
    fn hit_masks(&self, radius: f64, policy: &PrecisionPolicy) -> Result<Vec<u64>>;
    fn min_signed(&self, tie: f64) -> (f64, SignAssignment);
}

struct Engine<A: Arith> {
    arith: A,
    n: usize,
    dim: usize,
    vectors: Vec<Vec<A::Num>>,
    twice: Vec<Vec<A::Num>>,
    prefix_bits: usize,
    suffix_bits: usize,
}

/// Per-block partial results; merged in block order.
struct BlockStats<N> {
    hits: u64,
    ambiguous: u64,
    first_ambiguous: Option<u64>,
    min_sq: N,
    margin: N,
    max_hit_sq: Option<N>,
    min_miss_sq: Option<N>,
}

impl<A: Arith> Engine<A> {
    fn new(arith: A, vectors: Vec<Vec<A::Num>>) -> Self {
        let n = vectors.len();
        let dim = vectors.first().map_or(0, Vec::len);
        let two = arith.from_f64(2.0);
        let twice = vectors
            .iter()
            .map(|v| v.iter().map(|x| arith.mul(x, &two)).collect())
            .collect();
        let prefix_bits = PREFIX_BITS.min(n);
        Engine {
            arith,
            n,
            dim,
            vectors,
            twice,
            prefix_bits,
            suffix_bits: n - prefix_bits,
        }
    }

    fn num_blocks(&self) -> u64 {
        1u64 << self.prefix_bits
    }

    fn sum_for_mask(&self, mask: u64) -> Vec<A::Num> {
        let a = &self.arith;
        let mut sum = vec![a.from_f64(0.0); self.dim];
        for (i, v) in self.vectors.iter().enumerate() {
            let negative = mask >> (self.n - 1 - i) & 1 == 1;
            for (s, x) in sum.iter_mut().zip(v) {
                *s = if negative { a.sub(s, x) } else { a.add(s, x) };
            }
        }
        sum
    }

    /// Visits every assignment of block `block` as `(mask, ||sum||^2)`.
    fn walk_block(&self, block: u64, mut visit: impl FnMut(u64, &A::Num)) {
        let a = &self.arith;
        let m = self.suffix_bits;
        let base = block << m;
        let mut sum = self.sum_for_mask(base);
        let steps: u64 = 1 << m;
        let mut gray = 0u64;
        for t in 0..steps {
            let sq = a.norm_sq(&sum);
            visit(base | gray, &sq);
            let next = t + 1;
            if next == steps {
                break;
            }
            let bit = next.trailing_zeros() as usize;
            gray ^= 1 << bit;
            if next % RESYNC_INTERVAL == 0 {
                sum = self.sum_for_mask(base | gray);
                continue;
            }
            let idx = self.n - 1 - bit;
            let step = &self.twice[idx];
            if gray >> bit & 1 == 1 {
                for (s, x) in sum.iter_mut().zip(step) {
                    *s = a.sub(s, x);
                }
            } else {
                for (s, x) in sum.iter_mut().zip(step) {
                    *s = a.add(s, x);
                }
            }
        }
    }

    fn block_stats(&self, block: u64, r2: &A::Num, threshold: &A::Num) -> BlockStats<A::Num> {
        let a = &self.arith;
        let mut stats: Option<BlockStats<A::Num>> = None;
        self.walk_block(block, |mask, sq| {
            let gap = a.abs(&a.sub(sq, r2));
            let verdict = a.classify(sq, threshold);
            let st = stats.get_or_insert_with(|| BlockStats {
                hits: 0,
                ambiguous: 0,
                first_ambiguous: None,
                min_sq: sq.clone(),
                margin: gap.clone(),
                max_hit_sq: None,
                min_miss_sq: None,
            });
            if a.cmp(sq, &st.min_sq) == Ordering::Less {
                st.min_sq = sq.clone();
            }
            if a.cmp(&gap, &st.margin) == Ordering::Less {
                st.margin = gap;
            }
            match verdict {
                Verdict::Inside => {
                    st.hits += 1;
                    if st.max_hit_sq.as_ref().is_none_or(|h| a.cmp(sq, h) == Ordering::Greater) {
                        st.max_hit_sq = Some(sq.clone());
                    }
                }
                Verdict::Outside => {
                    if st.min_miss_sq.as_ref().is_none_or(|h| a.cmp(sq, h) == Ordering::Less) {
                        st.min_miss_sq = Some(sq.clone());
                    }
                }
                Verdict::Ambiguous => {
                    st.ambiguous += 1;
                    st.first_ambiguous.get_or_insert(mask);
                }
            }
        });
        stats.expect("every block holds at least one assignment")
    }

    /// Global minimum of `||sum||^2` and the per-block minima.
    fn minimum(&self) -> (A::Num, Vec<A::Num>) {
        let a = &self.arith;
        let per_block: Vec<A::Num> = (0..self.num_blocks())
            .into_par_iter()
            .map(|b| {
                let mut best: Option<A::Num> = None;
                self.walk_block(b, |_, sq| {
                    if best.as_ref().is_none_or(|m| a.cmp(sq, m) == Ordering::Less) {
                        best = Some(sq.clone());
                    }
                });
                best.expect("nonempty block")
            })
            .collect();
        let global = per_block
            .iter()
            .min_by(|x, y| a.cmp(x, y))
            .cloned()
            .expect("at least one block");
        (global, per_block)
    }

    /// Smallest mask whose squared norm is within `tie` of `min_sq`.
    fn argmin(&self, min_sq: &A::Num, tie: f64) -> u64 {
        let a = &self.arith;
        let limit = a.add(min_sq, &a.from_f64(tie));
        // Blocks are ordered by their prefix, which holds the most significant
        // mask bits, so the first block containing a candidate contains the answer.
        for b in 0..self.num_blocks() {
            let mut best: Option<u64> = None;
            self.walk_block(b, |mask, sq| {
                if a.cmp(sq, &limit) != Ordering::Greater && best.is_none_or(|m| mask < m) {
                    best = Some(mask);
                }
            });
            if let Some(mask) = best {
                return mask;
            }
        }
        unreachable!("the minimum is attained by some assignment")
    }

    fn thresholds(&self, radius: f64, policy: &PrecisionPolicy) -> (A::Num, A::Num) {
        let a = &self.arith;
        let r = a.from_f64(radius);
        let r2 = a.mul(&r, &r);
        let threshold = a.add(&r2, &a.from_f64(policy.classification_tolerance));
        (r2, threshold)
    }
}

impl<A: Arith> EngineOps for Engine<A> {
    fn min_signed(&self, tie: f64) -> (f64, SignAssignment) {
        let (min_sq, _) = self.minimum();
        let mask = self.argmin(&min_sq, tie);
        (
            self.arith.to_f64(&self.arith.sqrt(&min_sq)),
            SignAssignment::from_mask(mask, self.n),
        )
    }

    fn report(&self, radius: f64, policy: &PrecisionPolicy) -> Result<EnumerationReport> {
        let a = &self.arith;
        let (r2, threshold) = self.thresholds(radius, policy);
        let blocks: Vec<BlockStats<A::Num>> = (0..self.num_blocks())
            .into_par_iter()
            .map(|b| self.block_stats(b, &r2, &threshold))
            .collect();

        let mut iter = blocks.into_iter();
        let mut acc = iter.next().expect("at least one block");
        for st in iter {
            acc.hits += st.hits;
            acc.ambiguous += st.ambiguous;
            if acc.first_ambiguous.is_none() {
                acc.first_ambiguous = st.first_ambiguous;
            }
            if a.cmp(&st.min_sq, &acc.min_sq) == Ordering::Less {
                acc.min_sq = st.min_sq;
            }
            if a.cmp(&st.margin, &acc.margin) == Ordering::Less {
                acc.margin = st.margin;
            }
            acc.max_hit_sq = match (acc.max_hit_sq, st.max_hit_sq) {
                (Some(x), Some(y)) => Some(if a.cmp(&y, &x) == Ordering::Greater { y } else { x }),
                (x, y) => x.or(y),
            };
            acc.min_miss_sq = match (acc.min_miss_sq, st.min_miss_sq) {
                (Some(x), Some(y)) => Some(if a.cmp(&y, &x) == Ordering::Less { y } else { x }),
                (x, y) => x.or(y),
            };
        }

        if acc.ambiguous > 0 {
            let example = SignAssignment::from_mask(acc.first_ambiguous.unwrap_or(0), self.n);
            return Err(Error::AmbiguousClassification {
                count: acc.ambiguous,
                example: example.to_string(),
            });
        }

        let argmin = self.argmin(&acc.min_sq, policy.classification_tolerance);
        let min_norm = a.sqrt(&acc.min_sq);
        let miss_gap = acc.min_miss_sq.as_ref().map(|q| a.sub(q, &r2));
        Ok(EnumerationReport {
            n: self.n,
            dim: self.dim,
            total: 1u64 << self.n,
            hits: acc.hits,
            radius,
            min_norm: a.to_f64(&min_norm),
            min_norm_decimal: a.to_decimal(&min_norm),
            argmin: SignAssignment::from_mask(argmin, self.n),
            margin: a.to_f64(&acc.margin),
            margin_decimal: a.to_decimal(&acc.margin),
            hit_slack: acc.max_hit_sq.as_ref().map(|q| a.to_f64(&a.sub(&r2, q))),
            miss_gap: miss_gap.as_ref().map(|g| a.to_f64(g)),
            miss_gap_decimal: miss_gap.as_ref().map(|g| a.to_decimal(g)),
            precision: policy.to_string(),
            classification_tolerance: policy.classification_tolerance,
        })
    }

    fn hit_masks(&self, radius: f64, policy: &PrecisionPolicy) -> Result<Vec<u64>> {
        let a = &self.arith;
        let (_, threshold) = self.thresholds(radius, policy);
        let blocks: Vec<(Vec<u64>, u64)> = (0..self.num_blocks())
            .into_par_iter()
            .map(|b| {
                let mut hits = Vec::new();
                let mut ambiguous = 0;
                self.walk_block(b, |mask, sq| match a.classify(sq, &threshold) {
                    Verdict::Inside => hits.push(mask),
                    Verdict::Outside => {}
                    Verdict::Ambiguous => ambiguous += 1,
                });
                (hits, ambiguous)
            })
            .collect();
        let ambiguous: u64 = blocks.iter().map(|b| b.1).sum();
        if ambiguous > 0 {
            return Err(Error::AmbiguousClassification {
                count: ambiguous,
                example: "see enumerate".into(),
            });
        }
        let mut masks: Vec<u64> = blocks.into_iter().flat_map(|b| b.0).collect();
        masks.sort_unstable();
        Ok(masks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{signed_sum, validate_config, NormMode};

    fn cfg(raw: Vec<Vec<f64>>) -> VectorConfig {
        VectorConfig::unit(raw).unwrap()
    }

    /// Straight loop over all masks, no Gray code, no blocks.
    fn brute(config: &VectorConfig, radius: f64) -> (u64, f64, u64) {
        let n = config.len();
        let mut hits = 0;
        let mut best = (f64::INFINITY, 0u64);
        for mask in 0..1u64 << n {
            let s = signed_sum(config, &SignAssignment::from_mask(mask, n)).unwrap();
            let q: f64 = s.iter().map(|x| x * x).sum();
            if q <= radius * radius + 1e-12 {
                hits += 1;
            }
            if q < best.0 - 1e-12 {
                best = (q, mask);
            }
        }
        (hits, best.0.sqrt(), best.1)
    }

    #[test]
    fn duplicated_axis() {
        let c = cfg(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        let rep = enumerate(&c, 1.0, &PrecisionPolicy::double()).unwrap();
        assert_eq!((rep.hits, rep.total), (2, 4));
        assert_eq!(rep.probability(), Ratio::new(1, 2));
        assert_eq!(rep.min_norm, 0.0);
        assert_eq!(rep.argmin.signs(), &[1, -1]);
    }

    #[test]
    fn orthonormal_pair() {
        let c = cfg(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let rep = enumerate(&c, 2f64.sqrt(), &PrecisionPolicy::double()).unwrap();
        assert_eq!((rep.hits, rep.total), (4, 4));
        assert!((rep.min_norm - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(rep.argmin.signs(), &[1, 1]);
    }

    #[test]
    fn min_signed_norm_examples() {
        let c = cfg(vec![vec![1.0], vec![1.0], vec![1.0]]);
        let (m, s) = min_signed_norm(&c, &PrecisionPolicy::double()).unwrap();
        assert_eq!(m, 1.0);
        assert_eq!(s.signs(), &[1, 1, -1]);

        let c = cfg(vec![
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        let (m, _) = min_signed_norm(&c, &PrecisionPolicy::double()).unwrap();
        assert!((m - 2f64.sqrt()).abs() < 1e-15);

        let c = cfg(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let (m, _) = min_signed_norm(&c, &PrecisionPolicy::double()).unwrap();
        assert!((m - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn too_large_and_bad_radius() {
        let c = cfg(vec![vec![1.0]; 31]);
        assert!(matches!(
            enumerate(&c, 1.0, &PrecisionPolicy::double()),
            Err(Error::TooLarge { n: 31, cap: 30 })
        ));
        let c = cfg(vec![vec![1.0]; 3]);
        assert!(matches!(enumerate(&c, -1.0, &PrecisionPolicy::double()), Err(Error::InvalidRadius(_))));
        assert!(matches!(
            enumerate(&c, f64::NAN, &PrecisionPolicy::double()),
            Err(Error::InvalidRadius(_))
        ));
    }

    #[test]
    fn matches_plain_loop_across_block_layouts() {
        // n below, at and above the prefix width, and long enough to hit a resync.
        for &n in &[1usize, 3, 6, 7, 12] {
            let raw: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let t = 0.37 * i as f64 + 0.1;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            let c = cfg(raw);
            for &r in &[0.5, 1.0, 1.7] {
                let rep = enumerate(&c, r, &PrecisionPolicy::double()).unwrap();
                let (hits, min, argmin) = brute(&c, r);
                assert_eq!(rep.hits, hits, "n={n} r={r}");
                assert!((rep.min_norm - min).abs() < 1e-12);
                assert_eq!(rep.argmin.mask(), argmin, "n={n}");
            }
        }
    }

    #[test]
    fn resync_keeps_sums_exact_enough() {
        let raw: Vec<Vec<f64>> = (0..14)
            .map(|i| {
                let t = 1.3 * i as f64;
                let v = [t.cos() * 0.6, t.sin() * 0.6, 0.8];
                v.to_vec()
            })
            .collect();
        let c = validate_config(raw, NormMode::Strict, 1e-9).unwrap();
        let norms = all_squared_norms(&c).unwrap();
        for mask in [0u64, 1, 1023, 1024, 4097, (1 << 14) - 1] {
            let s = signed_sum(&c, &SignAssignment::from_mask(mask, 14)).unwrap();
            let q: f64 = s.iter().map(|x| x * x).sum();
            assert!((norms[mask as usize] - q).abs() < 1e-12);
        }
    }

    #[test]
    fn margin_fields() {
        let c = cfg(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let rep = enumerate(&c, 1.0, &PrecisionPolicy::double()).unwrap();
        assert_eq!(rep.hits, 0);
        assert_eq!(rep.miss_gap, Some(1.0));
        assert_eq!(rep.hit_slack, None);
        assert_eq!(rep.margin, 1.0);
    }

    #[test]
    fn extended_and_interval_agree_on_easy_cases() {
        let c = cfg(vec![vec![1.0, 0.0], vec![0.6, 0.8], vec![0.0, 1.0]]);
        let d = enumerate(&c, 1.2, &PrecisionPolicy::double()).unwrap();
        let e = enumerate(&c, 1.2, &PrecisionPolicy::extended(128).unwrap()).unwrap();
        let i = enumerate(&c, 1.2, &PrecisionPolicy::interval()).unwrap();
        assert_eq!(d.hits, e.hits);
        assert_eq!(d.hits, i.hits);
        assert!((d.min_norm - e.min_norm).abs() < 1e-15);
        assert_eq!(d.argmin, e.argmin);
    }

    #[test]
    fn interval_refuses_boundary_straddle() {
        // (0.6, 0.8) - (0.6, -0.8)... the sum lands at norm exactly 1.6; the
        // interval for 1.6^2 straddles the threshold when the radius equals it.
        let c = cfg(vec![vec![0.6, 0.8], vec![0.6, -0.8]]);
        let pol = PrecisionPolicy::interval().with_tolerance(0.0).unwrap();
        let r = 1.2f64;
        let err = enumerate(&c, r, &pol).unwrap_err();
        assert!(matches!(err, Error::AmbiguousClassification { .. }), "{err:?}");
        assert!(enumerate(&c, 1.3, &pol).is_ok());
    }

    #[test]
    fn json_report_uses_exact_integers() {
        let c = cfg(vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        let v = enumerate(&c, 1.0, &PrecisionPolicy::double()).unwrap().to_json_value();
        assert_eq!(v["hits"], 2);
        assert_eq!(v["total"], 4);
        assert_eq!(v["probability"], "1/2");
        assert!(v["min_norm"].is_string());
    }
}
