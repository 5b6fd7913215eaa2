//! Generators for the concrete vector families and for random test corpora.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{dot, validate_config, NormMode, SignAssignment, VectorConfig, DEFAULT_NORM_TOLERANCE};
use crate::enumerate::min_signed_norm;
use crate::error::{Error, Result};
use crate::precision::{Arith, ExtendedArith, PrecisionMode, PrecisionPolicy};

/// Default ratio for [`construct_exponential`].
pub const DEFAULT_RATIO: f64 = 1.0 / 20.0;

/// Tolerance used to accept a tight-family instance.
pub const TIGHT_TOLERANCE: f64 = 1e-9;

/// Estimated gap `min ||sum||^2 - 1` over non-qualifying assignments of the
/// exponential construction, `4 (1 - sqrt(1 - c^{2k}))`.
pub fn exponential_gap_estimate(n: usize, c: f64) -> f64 {
    let k = (n / 2) as i32;
    let t = c.powi(2 * k);
    // 1 - sqrt(1 - t) without cancellation.
    4.0 * t / (1.0 + (1.0 - t).sqrt())
}

/// Smallest gap a policy can classify reliably for `n` vectors.
pub fn resolvable_gap(n: usize, policy: &PrecisionPolicy) -> f64 {
    let rounding = 64.0 * (n as f64) * policy.unit_roundoff();
    policy.classification_tolerance.max(rounding)
}

/// `v_{2i-1} = v_{2i} = (sqrt(1 - c^{2i}), c^i)` for `i <= n/2`, then `v_n = (1, 0)`.
///
/// In extended mode the vectors are computed at the policy's width from the
/// shortest decimal form of `c` and carried as decimal strings.
pub fn construct_exponential(n: usize, c: f64, policy: &PrecisionPolicy) -> Result<VectorConfig> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::OutOfRange {
            name: "c",
            value: c,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let gap = exponential_gap_estimate(n, c);
    if n >= 3 && gap <= resolvable_gap(n, policy) {
        return Err(Error::PrecisionInsufficient {
            n,
            margin: gap,
            policy: policy.to_string(),
        });
    }
    let k = n / 2;
    match policy.mode {
        PrecisionMode::Extended { bits } => exponential_extended(k, c, bits),
        _ => {
            let mut raw = Vec::with_capacity(n);
            for i in 1..=k {
                let s = c.powi(i as i32);
                let v = vec![(1.0 - s * s).sqrt(), s];
                raw.push(v.clone());
                raw.push(v);
            }
            raw.push(vec![1.0, 0.0]);
            validate_config(raw, NormMode::Strict, DEFAULT_NORM_TOLERANCE)
        }
    }
}

fn exponential_extended(k: usize, c: f64, bits: usize) -> Result<VectorConfig> {
    let ea = ExtendedArith { bits };
    let c_big = ea.parse(&c.to_string())?;
    let one = ea.from_f64(1.0);
    let mut raw = Vec::with_capacity(2 * k + 1);
    let mut dec = Vec::with_capacity(2 * k + 1);
    for i in 1..=k {
        let s = ea.powi(&c_big, i);
        let x = ea.sqrt(&ea.sub(&one, &ea.mul(&s, &s)));
        let row = vec![ea.to_decimal(&x), ea.to_decimal(&s)];
        let v = vec![ea.to_f64(&x), ea.to_f64(&s)];
        for _ in 0..2 {
            raw.push(v.clone());
            dec.push(row.clone());
        }
    }
    raw.push(vec![1.0, 0.0]);
    dec.push(vec!["1".into(), "0".into()]);
    validate_config(raw, NormMode::Strict, DEFAULT_NORM_TOLERANCE)?.with_decimal_coordinates(dec)
}

/// Whether `eta_{2i-1} = -eta_{2i}` for every pair.
pub fn pair_anti_aligned(signs: &SignAssignment, n: usize) -> Result<bool> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    if signs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: signs.len(),
        });
    }
    Ok((0..n / 2).all(|i| signs.get(2 * i) == -signs.get(2 * i + 1)))
}

/// `m_i` copies of each standard basis vector `e_i`, grouped by axis.
pub fn construct_orthonormal_multiplicity(d: usize, multiplicities: &[usize]) -> Result<VectorConfig> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if multiplicities.len() != d {
        return Err(Error::InvalidParameter(format!(
            "expected {d} multiplicities, got {}",
            multiplicities.len()
        )));
    }
    let mut raw = Vec::new();
    for (axis, &m) in multiplicities.iter().enumerate() {
        let mut e = vec![0.0; d];
        e[axis] = 1.0;
        raw.extend(std::iter::repeat_n(e, m));
    }
    if raw.is_empty() {
        return Err(Error::EmptyConfig);
    }
    validate_config(raw, NormMode::Strict, DEFAULT_NORM_TOLERANCE)
}

/// `n = 4` in `R^3` with `v_1 = v_2` and `v_3` orthogonal to `v_4`, accepted only
/// when enumeration confirms the minimum signed norm is `sqrt(2)`.
pub fn construct_tight_family(v1: [f64; 3], v3: [f64; 3], v4: [f64; 3]) -> Result<VectorConfig> {
    let inner = dot(&v3, &v4);
    if inner.abs() > 1e-10 {
        return Err(Error::NotOrthogonal(inner));
    }
    let config = validate_config(
        vec![v1.to_vec(), v1.to_vec(), v3.to_vec(), v4.to_vec()],
        NormMode::Strict,
        DEFAULT_NORM_TOLERANCE,
    )?;
    let (min, _) = min_signed_norm(&config, &PrecisionPolicy::double())?;
    if (min - 2f64.sqrt()).abs() > TIGHT_TOLERANCE {
        return Err(Error::NotTight(min));
    }
    Ok(config)
}

/// `(e_1, e_1, e_2, e_3)`.
pub fn tight_canonical() -> VectorConfig {
    construct_tight_family([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).expect("canonical instance is tight")
}

/// Tight-family member with `v_1` at spherical angles `(polar, azimuth)` from
/// `e_1`, and `(v_3, v_4)` the orthonormal pair of `span(e_2, e_3)` rotated by `twist`.
pub fn tight_from_angles(polar: f64, azimuth: f64, twist: f64) -> Result<VectorConfig> {
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    let (st, ct) = twist.sin_cos();
    construct_tight_family([cp, sp * ca, sp * sa], [0.0, ct, st], [0.0, -st, ct])
}

/// Appends duplicated pairs `v_j, v_j` for each listed source index.
pub fn add_duplicate_pairs(config: &VectorConfig, sources: &[usize]) -> Result<VectorConfig> {
    let doubled: Vec<usize> = sources.iter().flat_map(|&j| [j, j]).collect();
    if let Some(&bad) = sources.iter().find(|&&j| j >= config.len()) {
        return Err(Error::InvalidParameter(format!("no vector at index {bad}")));
    }
    config.extended_with(&doubled)
}

/// Uniform sample from the unit sphere of `R^d`.
pub fn random_unit_vector(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `n` independent uniform unit vectors in `R^d`, deterministic per seed.
pub fn random_unit_config(d: usize, n: usize, seed: u64) -> Result<VectorConfig> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = (0..n).map(|_| random_unit_vector(d, &mut rng)).collect();
    validate_config(raw, NormMode::Strict, DEFAULT_NORM_TOLERANCE)
}

/// `n` vectors of length at most one: uniform directions, lengths uniform in `[0, 1]`.
pub fn random_ball_config(d: usize, n: usize, seed: u64) -> Result<VectorConfig> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = (0..n)
        .map(|_| {
            let v = random_unit_vector(d, &mut rng);
            let len: f64 = rng.gen();
            v.into_iter().map(|x| x * len).collect()
        })
        .collect();
    validate_config(raw, NormMode::Beck, DEFAULT_NORM_TOLERANCE)
}

/// A named family, parseable from the command line.
///
/// Grammar: `exponential:N[:C]`, `ortho:M1,M2,..`, `tight[:POLAR,AZIMUTH,TWIST]`,
/// `random:D:N:SEED`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionSpec {
    Exponential { n: usize, c: f64 },
    OrthonormalMultiplicity { multiplicities: Vec<usize> },
    Tight { angles: Option<(f64, f64, f64)> },
    RandomUnit { d: usize, n: usize, seed: u64 },
}

impl ConstructionSpec {
    pub fn build(&self, policy: &PrecisionPolicy) -> Result<VectorConfig> {
        match self {
            ConstructionSpec::Exponential { n, c } => construct_exponential(*n, *c, policy),
            ConstructionSpec::OrthonormalMultiplicity { multiplicities } => {
                construct_orthonormal_multiplicity(multiplicities.len(), multiplicities)
            }
            ConstructionSpec::Tight { angles: None } => Ok(tight_canonical()),
            ConstructionSpec::Tight {
                angles: Some((p, a, t)),
            } => tight_from_angles(*p, *a, *t),
            ConstructionSpec::RandomUnit { d, n, seed } => random_unit_config(*d, *n, *seed),
        }
    }
}

fn parse_num<T: FromStr>(field: &str, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse {what} from `{field}`")))
}

impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let bad = || Error::InvalidParameter(format!("malformed construction `{s}`"));
        match (kind, rest.as_slice()) {
            ("exponential", [n]) => Ok(ConstructionSpec::Exponential {
                n: parse_num(n, "n")?,
                c: DEFAULT_RATIO,
            }),
            ("exponential", [n, c]) => Ok(ConstructionSpec::Exponential {
                n: parse_num(n, "n")?,
                c: parse_ratio(c)?,
            }),
            ("ortho", [ms]) => Ok(ConstructionSpec::OrthonormalMultiplicity {
                multiplicities: ms
                    .split(',')
                    .map(|m| parse_num(m, "multiplicity"))
                    .collect::<Result<_>>()?,
            }),
            ("tight", []) => Ok(ConstructionSpec::Tight { angles: None }),
            ("tight", [angles]) => {
                let a: Vec<f64> = angles
                    .split(',')
                    .map(|x| parse_num(x, "angle"))
                    .collect::<Result<_>>()?;
                match a.as_slice() {
                    [p, az, t] => Ok(ConstructionSpec::Tight {
                        angles: Some((*p, *az, *t)),
                    }),
                    _ => Err(bad()),
                }
            }
            ("random", [d, n, seed]) => Ok(ConstructionSpec::RandomUnit {
                d: parse_num(d, "d")?,
                n: parse_num(n, "n")?,
                seed: parse_num(seed, "seed")?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Accepts `0.05` as well as `1/20`.
fn parse_ratio(s: &str) -> Result<f64> {
    match s.split_once('/') {
        Some((p, q)) => Ok(parse_num::<f64>(p, "c")? / parse_num::<f64>(q, "c")?),
        None => parse_num(s, "c"),
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::Exponential { n, c } => write!(f, "exponential:{n}:{c}"),
            ConstructionSpec::OrthonormalMultiplicity { multiplicities } => {
                let ms: Vec<String> = multiplicities.iter().map(ToString::to_string).collect();
                write!(f, "ortho:{}", ms.join(","))
            }
            ConstructionSpec::Tight { angles: None } => write!(f, "tight"),
            ConstructionSpec::Tight {
                angles: Some((p, a, t)),
            } => write!(f, "tight:{p},{a},{t}"),
            ConstructionSpec::RandomUnit { d, n, seed } => write!(f, "random:{d}:{n}:{seed}"),
        }
    }
}
