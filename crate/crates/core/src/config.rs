//! Vector configurations, sign assignments and relaxed coefficient vectors.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm constraint applied at validation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    /// Every vector has norm 1 within the tolerance.
    #[default]
    Strict,
    /// Every vector has norm at most 1 (plus tolerance).
    Beck,
}

impl NormMode {
    pub fn name(&self) -> &'static str {
        match self {
            NormMode::Strict => "strict",
            NormMode::Beck => "beck",
        }
    }
}

/// An ordered sequence of `n` vectors in `R^d` that passed norm validation.
///
/// Optionally carries decimal coordinates at higher precision than `f64`; the
/// extended-precision enumeration backend reads those instead of the doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorConfig {
    dim: usize,
    vectors: Vec<Vec<f64>>,
    norm_tolerance: f64,
    mode: NormMode,
    decimal: Option<Vec<Vec<String>>>,
}

/// Checks raw vectors against the norm constraint. Never renormalizes.
pub fn validate_config(raw: Vec<Vec<f64>>, mode: NormMode, tolerance: f64) -> Result<VectorConfig> {
    if raw.is_empty() {
        return Err(Error::EmptyConfig);
    }
    let dim = raw[0].len();
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!("norm tolerance {tolerance} is negative")));
    }
    for (index, v) in raw.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found: v.len(),
            });
        }
        let norm = norm(v);
        let ok = match mode {
            NormMode::Strict => (norm - 1.0).abs() <= tolerance,
            NormMode::Beck => norm <= 1.0 + tolerance,
        };
        if !ok || !norm.is_finite() {
            return Err(Error::NormViolation {
                index,
                norm,
                mode: mode.name(),
                tolerance,
            });
        }
    }
    Ok(VectorConfig {
        dim,
        vectors: raw,
        norm_tolerance: tolerance,
        mode,
        decimal: None,
    })
}

/// Default validation tolerance on vector norms.
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-9;

impl VectorConfig {
    /// Strict-mode validation with the default tolerance.
    pub fn unit(raw: Vec<Vec<f64>>) -> Result<Self> {
        validate_config(raw, NormMode::Strict, DEFAULT_NORM_TOLERANCE)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Always false: validation rejects empty configurations.
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn mode(&self) -> NormMode {
        self.mode
    }

    pub fn norm_tolerance(&self) -> f64 {
        self.norm_tolerance
    }

    pub fn inner(&self, i: usize, j: usize) -> f64 {
        dot(&self.vectors[i], &self.vectors[j])
    }

    /// High-precision decimal coordinates, when present.
    pub fn decimal_coordinates(&self) -> Option<&[Vec<String>]> {
        self.decimal.as_deref()
    }

    /// Attaches decimal coordinates that refine the stored doubles.
    ///
    /// Each string must parse to a number within `1e-12` of the matching double.
    pub fn with_decimal_coordinates(mut self, decimal: Vec<Vec<String>>) -> Result<Self> {
        if decimal.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: decimal.len(),
            });
        }
        for (index, (row, v)) in decimal.iter().zip(&self.vectors).enumerate() {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: self.dim,
                    found: row.len(),
                });
            }
            for (s, x) in row.iter().zip(v) {
                let parsed: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse coordinate `{s}`")))?;
                if (parsed - x).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "decimal coordinate `{s}` of vector {index} disagrees with {x}"
                    )));
                }
            }
        }
        self.decimal = Some(decimal);
        Ok(self)
    }

    /// Sub-configuration made of the listed indices, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<VectorConfig> {
        let raw = indices.iter().map(|&i| self.vectors[i].clone()).collect();
        let mut sub = validate_config(raw, self.mode, self.norm_tolerance)?;
        if let Some(dec) = &self.decimal {
            sub.decimal = Some(indices.iter().map(|&i| dec[i].clone()).collect());
        }
        Ok(sub)
    }

    /// Appends copies of existing vectors.
    pub fn extended_with(&self, sources: &[usize]) -> Result<VectorConfig> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.extend_from_slice(sources);
        self.select(&idx)
    }

    /// Replaces vector `i` by its negation.
    pub fn negated(&self, i: usize) -> VectorConfig {
        let mut out = self.clone();
        for x in &mut out.vectors[i] {
            *x = -*x;
        }
        if let Some(dec) = &mut out.decimal {
            for s in &mut dec[i] {
                *s = match s.strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{s}"),
                };
            }
        }
        out
    }

    /// Applies a `d x d` matrix (row-major) to every vector, revalidating norms.
    pub fn transformed(&self, matrix: &[Vec<f64>]) -> Result<VectorConfig> {
        if matrix.len() != self.dim || matrix.iter().any(|r| r.len() != self.dim) {
            return Err(Error::InvalidParameter("transform must be a d x d matrix".into()));
        }
        let raw = self
            .vectors
            .iter()
            .map(|v| matrix.iter().map(|row| dot(row, v)).collect())
            .collect();
        validate_config(raw, self.mode, self.norm_tolerance.max(1e-9))
    }

    pub fn to_file(&self) -> ConfigFile {
        let vectors = match &self.decimal {
            Some(dec) => dec
                .iter()
                .map(|row| row.iter().cloned().map(Coordinate::Text).collect())
                .collect(),
            None => self
                .vectors
                .iter()
                .map(|row| row.iter().copied().map(Coordinate::Number).collect())
                .collect(),
        };
        ConfigFile {
            dim: self.dim,
            vectors,
            mode: self.mode,
            manifest: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<VectorConfig> {
        let file: ConfigFile = serde_json::from_str(text)?;
        file.into_config()
    }

    pub fn load(path: &Path) -> Result<VectorConfig> {
        VectorConfig::from_json(&std::fs::read_to_string(path)?)
    }
}

impl Serialize for VectorConfig {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

/// One coordinate in a configuration file: a JSON number, or a decimal string
/// when the value needs more precision than a double.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Number(f64),
    Text(String),
}

/// On-disk configuration: `{"dim": d, "vectors": [[...], ...], "mode": "strict"|"beck"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub dim: usize,
    pub vectors: Vec<Vec<Coordinate>>,
    #[serde(default)]
    pub mode: NormMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl ConfigFile {
    pub fn into_config(self) -> Result<VectorConfig> {
        let mut raw = Vec::with_capacity(self.vectors.len());
        let mut any_text = false;
        for row in &self.vectors {
            let mut v = Vec::with_capacity(row.len());
            for c in row {
                v.push(match c {
                    Coordinate::Number(x) => *x,
                    Coordinate::Text(s) => {
                        any_text = true;
                        s.trim().parse().map_err(|_| {
                            Error::InvalidParameter(format!("cannot parse coordinate `{s}`"))
                        })?
                    }
                });
            }
            raw.push(v);
        }
        if let Some(first) = raw.first() {
            if first.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    index: 0,
                    expected: self.dim,
                    found: first.len(),
                });
            }
        }
        let config = validate_config(raw, self.mode, DEFAULT_NORM_TOLERANCE)?;
        if !any_text {
            return Ok(config);
        }
        let decimal = self
            .vectors
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Coordinate::Number(x) => format!("{x:e}"),
                        Coordinate::Text(s) => s.trim().to_string(),
                    })
                    .collect()
            })
            .collect();
        config.with_decimal_coordinates(decimal)
    }
}

/// A choice of sign for each vector.
///
/// Masks encode assignments as integers: bit `n - 1 - i` is set when vector
/// `i` gets `-1`. Numeric order of masks is lexicographic order of the sign
/// sequences with `+1` before `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SignAssignment(Vec<i8>);

impl SignAssignment {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        for (index, &s) in signs.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign {
                    index,
                    value: s as i64,
                });
            }
        }
        Ok(SignAssignment(signs))
    }

    pub fn all_plus(n: usize) -> Self {
        SignAssignment(vec![1; n])
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        SignAssignment(
            (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn mask(&self) -> u64 {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |m, (i, _)| m | 1 << (n - 1 - i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| s as f64).collect()
    }

    pub fn negated(&self) -> Self {
        SignAssignment(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i64>> for SignAssignment {
    type Error = Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        for (index, &s) in v.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign { index, value: s });
            }
        }
        Ok(SignAssignment(v.into_iter().map(|s| s as i8).collect()))
    }
}

impl From<SignAssignment> for Vec<i64> {
    fn from(s: SignAssignment) -> Vec<i64> {
        s.0.into_iter().map(i64::from).collect()
    }
}

impl fmt::Display for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if *s > 0 { "+1" } else { "-1" })?;
        }
        write!(f, ")")
    }
}

/// Relaxed coefficients, each in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        for (index, &value) in coefficients.iter().enumerate() {
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::CoefficientOutOfBox { index, value });
            }
        }
        Ok(CoefficientVector(coefficients))
    }

    pub fn zeros(n: usize) -> Self {
        CoefficientVector(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Indices whose coefficient is not exactly `+1` or `-1`.
    pub fn fractional_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].abs() != 1.0).collect()
    }
}

impl TryFrom<Vec<f64>> for CoefficientVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        CoefficientVector::new(v)
    }
}

impl From<CoefficientVector> for Vec<f64> {
    fn from(c: CoefficientVector) -> Vec<f64> {
        c.0
    }
}

/// `sum_i signs_i * v_i`.
pub fn signed_sum(config: &VectorConfig, signs: &SignAssignment) -> Result<Vec<f64>> {
    if signs.len() != config.len() {
        return Err(Error::LengthMismatch {
            expected: config.len(),
            found: signs.len(),
        });
    }
    let mut out = vec![0.0; config.dim()];
    for (v, &s) in config.vectors().iter().zip(signs.signs()) {
        axpy(&mut out, s as f64, v);
    }
    Ok(out)
}

/// `sum_i (lambda_i + eta_i) v_i`, the approximation error of Definition-style
/// rounding problems.
pub fn rounding_error(config: &VectorConfig, lambda: &CoefficientVector, signs: &SignAssignment) -> Result<Vec<f64>> {
    if lambda.len() != config.len() {
        return Err(Error::LengthMismatch {
            expected: config.len(),
            found: lambda.len(),
        });
    }
    if signs.len() != config.len() {
        return Err(Error::LengthMismatch {
            expected: config.len(),
            found: signs.len(),
        });
    }
    let mut out = vec![0.0; config.dim()];
    for i in 0..config.len() {
        axpy(&mut out, lambda.get(i) + signs.get(i) as f64, config.vector(i));
    }
    Ok(out)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(out: &mut [f64], alpha: f64, x: &[f64]) {
    for (o, xi) in out.iter_mut().zip(x) {
        *o += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let c = validate_config(vec![vec![1.0, 0.0], vec![0.0, 1.0]], NormMode::Strict, 1e-9).unwrap();
        assert_eq!((c.dim(), c.len()), (2, 2));

        match validate_config(vec![vec![0.5, 0.0]], NormMode::Strict, 1e-9) {
            Err(Error::NormViolation { index, norm, .. }) => {
                assert_eq!(index, 0);
                assert_eq!(norm, 0.5);
            }
            other => panic!("expected NormViolation, got {other:?}"),
        }
        assert!(validate_config(vec![vec![0.5, 0.0]], NormMode::Beck, 1e-9).is_ok());
    }

    #[test]
    fn validate_rejects_bad_shapes() {
        assert!(matches!(validate_config(vec![], NormMode::Strict, 1e-9), Err(Error::EmptyConfig)));
        assert!(matches!(
            validate_config(vec![vec![]], NormMode::Strict, 1e-9),
            Err(Error::ZeroDimension)
        ));
        assert!(matches!(
            validate_config(vec![vec![1.0, 0.0], vec![1.0]], NormMode::Strict, 1e-9),
            Err(Error::DimensionMismatch { index: 1, expected: 2, found: 1 })
        ));
        assert!(matches!(
            validate_config(vec![vec![1.5]], NormMode::Beck, 1e-9),
            Err(Error::NormViolation { .. })
        ));
        assert!(validate_config(vec![vec![f64::NAN]], NormMode::Beck, 1e-9).is_err());
    }

    #[test]
    fn never_renormalizes() {
        let c = validate_config(vec![vec![0.6, 0.0]], NormMode::Beck, 1e-9).unwrap();
        assert_eq!(c.vector(0), &[0.6, 0.0]);
    }

    #[test]
    fn signed_sum_examples() {
        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = SignAssignment::new(vec![1, -1]).unwrap();
        assert_eq!(signed_sum(&c, &s).unwrap(), vec![1.0, -1.0]);

        let c = VectorConfig::unit(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(signed_sum(&c, &s).unwrap(), vec![0.0, 0.0]);

        let short = SignAssignment::new(vec![1]).unwrap();
        assert!(matches!(signed_sum(&c, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn mask_order_is_lexicographic() {
        let n = 4;
        let all: Vec<SignAssignment> = (0..16).map(|m| SignAssignment::from_mask(m, n)).collect();
        for m in 0..16u64 {
            assert_eq!(all[m as usize].mask(), m);
        }
        let mut sorted = all.clone();
        // +1 sorts before -1 when comparing sign sequences with +1 as the smaller symbol.
        sorted.sort_by_key(|s| s.signs().iter().map(|&x| if x > 0 { 0 } else { 1 }).collect::<Vec<_>>());
        assert_eq!(sorted, all);
        assert_eq!(SignAssignment::from_mask(0b0100, 4).signs(), &[1, -1, 1, 1]);
    }

    #[test]
    fn sign_and_coefficient_validation() {
        assert!(SignAssignment::new(vec![1, 0]).is_err());
        assert!(CoefficientVector::new(vec![0.5, -1.0, 1.0]).is_ok());
        assert!(matches!(
            CoefficientVector::new(vec![0.0, 1.5]),
            Err(Error::CoefficientOutOfBox { index: 1, .. })
        ));
        let lam = CoefficientVector::new(vec![1.0, 0.3, -1.0, -0.2]).unwrap();
        assert_eq!(lam.fractional_indices(), vec![1, 3]);
    }

    #[test]
    fn json_shape() {
        let text = r#"{"dim": 2, "vectors": [[1, 0], [0, 1]], "mode": "strict"}"#;
        let c = VectorConfig::from_json(text).unwrap();
        assert_eq!(c.len(), 2);
        let beck = r#"{"dim": 1, "vectors": [[0.5]], "mode": "beck"}"#;
        assert_eq!(VectorConfig::from_json(beck).unwrap().mode(), NormMode::Beck);
        let bad = r#"{"dim": 3, "vectors": [[1, 0]], "mode": "strict"}"#;
        assert!(matches!(VectorConfig::from_json(bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_decimal_strings() {
        let text = r#"{"dim": 2, "vectors": [["0.6", "0.8"], [1, 0]], "mode": "strict"}"#;
        let c = VectorConfig::from_json(text).unwrap();
        let dec = c.decimal_coordinates().unwrap();
        assert_eq!(dec[0][0], "0.6");
        let again = VectorConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn sign_assignment_json() {
        let s: SignAssignment = serde_json::from_str("[1,-1,1]").unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,-1,1]");
        assert!(serde_json::from_str::<SignAssignment>("[1,2]").is_err());
        assert_eq!(s.to_string(), "(+1,-1,+1)");
    }
}
