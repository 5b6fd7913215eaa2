//! Precision policies and the arithmetic backends behind them.
//!
//! Every exact computation in the crate (enumeration, minimum signed norm)
//! runs over one of three backends selected by a [`PrecisionPolicy`]:
//!
//! * `double`: plain `f64`,
//! * `extended(bits)`: software binary floats with `bits` of mantissa,
//! * `interval`: `f64` intervals with outward rounding after every operation.
//!
//! Classification of a squared norm against a threshold is backend specific.
//! Point backends compare values; the interval backend refuses to decide when
//! the interval contains the threshold.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

/// Default classification tolerance on squared norms in double and interval mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Smallest mantissa width accepted by [`PrecisionMode::Extended`].
pub const MIN_EXTENDED_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionMode {
    Double,
    Extended { bits: usize },
    Interval,
}

/// How sums are computed and how close calls are classified.
///
/// A squared norm `q` is a hit at radius `r` when `q <= r^2 + classification_tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    pub mode: PrecisionMode,
    pub classification_tolerance: f64,
}

impl PrecisionPolicy {
    pub fn double() -> Self {
        PrecisionPolicy {
            mode: PrecisionMode::Double,
            classification_tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Extended precision with `bits` of mantissa; the default tolerance is `2^(-bits/2)`.
    pub fn extended(bits: usize) -> Result<Self> {
        if bits < MIN_EXTENDED_BITS {
            return Err(Error::InvalidParameter(format!(
                "extended precision needs at least {MIN_EXTENDED_BITS} bits, got {bits}"
            )));
        }
        let exponent = -((bits / 2).min(1000) as i32);
        Ok(PrecisionPolicy {
            mode: PrecisionMode::Extended { bits },
            classification_tolerance: 2f64.powi(exponent),
        })
    }

    pub fn interval() -> Self {
        PrecisionPolicy {
            mode: PrecisionMode::Interval,
            classification_tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "classification tolerance must be finite and nonnegative, got {tolerance}"
            )));
        }
        self.classification_tolerance = tolerance;
        Ok(self)
    }

    /// Working mantissa width in bits.
    pub fn bits(&self) -> usize {
        match self.mode {
            PrecisionMode::Double | PrecisionMode::Interval => 53,
            PrecisionMode::Extended { bits } => bits,
        }
    }

    /// Unit roundoff of the working precision.
    pub fn unit_roundoff(&self) -> f64 {
        2f64.powi(-(self.bits().min(1000) as i32))
    }

    pub fn is_extended(&self) -> bool {
        matches!(self.mode, PrecisionMode::Extended { .. })
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy::double()
    }
}

impl fmt::Display for PrecisionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            PrecisionMode::Double => write!(f, "double"),
            PrecisionMode::Extended { bits } => write!(f, "ext:{bits}"),
            PrecisionMode::Interval => write!(f, "interval"),
        }
    }
}

impl FromStr for PrecisionPolicy {
    type Err = Error;

    /// Parses `double`, `interval` or `ext:<bits>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "double" => Ok(PrecisionPolicy::double()),
            "interval" => Ok(PrecisionPolicy::interval()),
            other => {
                let bits = other
                    .strip_prefix("ext:")
                    .and_then(|b| b.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown precision `{other}` (expected double, interval or ext:<bits>)"
                        ))
                    })?;
                PrecisionPolicy::extended(bits)
            }
        }
    }
}

/// Outcome of comparing a computed squared norm with a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Verdict {
    Inside,
    Outside,
    Ambiguous,
}

/// Scalar arithmetic used by the enumeration engine.
pub(crate) trait Arith: Sync {
    type Num: Clone + Send + Sync;

    fn from_f64(&self, x: f64) -> Self::Num;
    fn add(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn sub(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn mul(&self, a: &Self::Num, b: &Self::Num) -> Self::Num;
    fn abs(&self, a: &Self::Num) -> Self::Num;
    fn sqrt(&self, a: &Self::Num) -> Self::Num;
    /// Total order on point estimates.
    fn cmp(&self, a: &Self::Num, b: &Self::Num) -> Ordering;
    fn classify(&self, value: &Self::Num, threshold: &Self::Num) -> Verdict;
    fn to_f64(&self, a: &Self::Num) -> f64;
    fn to_decimal(&self, a: &Self::Num) -> String;

    fn dot(&self, a: &[Self::Num], b: &[Self::Num]) -> Self::Num {
        let mut acc = self.from_f64(0.0);
        for (x, y) in a.iter().zip(b) {
            acc = self.add(&acc, &self.mul(x, y));
        }
        acc
    }

    fn norm_sq(&self, a: &[Self::Num]) -> Self::Num {
        self.dot(a, a)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct DoubleArith;

impl Arith for DoubleArith {
    type Num = f64;

    fn from_f64(&self, x: f64) -> f64 {
        x
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn abs(&self, a: &f64) -> f64 {
        a.abs()
    }
    fn sqrt(&self, a: &f64) -> f64 {
        a.max(0.0).sqrt()
    }
    fn cmp(&self, a: &f64, b: &f64) -> Ordering {
        a.total_cmp(b)
    }
    fn classify(&self, value: &f64, threshold: &f64) -> Verdict {
        if value <= threshold {
            Verdict::Inside
        } else {
            Verdict::Outside
        }
    }
    fn to_f64(&self, a: &f64) -> f64 {
        *a
    }
    fn to_decimal(&self, a: &f64) -> String {
        format!("{a:e}")
    }
}

/// Software floats with a fixed mantissa width, round-to-nearest-even.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ExtendedArith {
    pub bits: usize,
}

const RM: RoundingMode = RoundingMode::ToEven;

impl ExtendedArith {
    /// Parses decimal strings at the working width.
    pub fn parse_all(&self, items: &[&str]) -> Result<Vec<BigFloat>> {
        let mut consts = Consts::new()
            .map_err(|e| Error::InvalidParameter(format!("extended arithmetic unavailable: {e:?}")))?;
        items
            .iter()
            .map(|s| {
                let x = BigFloat::parse(s.trim(), Radix::Dec, self.bits, RM, &mut consts);
                if x.is_nan() || x.is_inf() {
                    Err(Error::InvalidParameter(format!("cannot parse `{s}` as a finite number")))
                } else {
                    Ok(x)
                }
            })
            .collect()
    }

    pub fn parse(&self, s: &str) -> Result<BigFloat> {
        Ok(self.parse_all(&[s])?.remove(0))
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }
}

impl Arith for ExtendedArith {
    type Num = BigFloat;

    fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }
    fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }
    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        if a.is_negative() {
            return BigFloat::from_f64(0.0, self.bits);
        }
        a.sqrt(self.bits, RM)
    }
    fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            Some(_) => Ordering::Greater,
            None => Ordering::Equal,
        }
    }
    fn classify(&self, value: &BigFloat, threshold: &BigFloat) -> Verdict {
        if self.cmp(value, threshold) == Ordering::Greater {
            Verdict::Outside
        } else {
            Verdict::Inside
        }
    }
    fn to_f64(&self, a: &BigFloat) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        a.to_string().parse().unwrap_or(f64::NAN)
    }
    fn to_decimal(&self, a: &BigFloat) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        a.to_string()
    }
}

/// Closed interval `[lo, hi]` of doubles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Interval arithmetic on doubles; every result is widened by one ulp per side.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct IntervalArith;

fn widen(lo: f64, hi: f64) -> Interval {
    Interval {
        lo: lo.next_down(),
        hi: hi.next_up(),
    }
}

impl Arith for IntervalArith {
    type Num = Interval;

    fn from_f64(&self, x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }
    fn add(&self, a: &Interval, b: &Interval) -> Interval {
        widen(a.lo + b.lo, a.hi + b.hi)
    }
    fn sub(&self, a: &Interval, b: &Interval) -> Interval {
        widen(a.lo - b.hi, a.hi - b.lo)
    }
    fn mul(&self, a: &Interval, b: &Interval) -> Interval {
        let p = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }
    fn abs(&self, a: &Interval) -> Interval {
        if a.lo >= 0.0 {
            *a
        } else if a.hi <= 0.0 {
            Interval { lo: -a.hi, hi: -a.lo }
        } else {
            Interval {
                lo: 0.0,
                hi: a.hi.max(-a.lo),
            }
        }
    }
    fn sqrt(&self, a: &Interval) -> Interval {
        Interval {
            lo: a.lo.max(0.0).sqrt().next_down().max(0.0),
            hi: a.hi.max(0.0).sqrt().next_up(),
        }
    }
    fn cmp(&self, a: &Interval, b: &Interval) -> Ordering {
        a.mid().total_cmp(&b.mid())
    }
    fn classify(&self, value: &Interval, threshold: &Interval) -> Verdict {
        if value.hi <= threshold.lo {
            Verdict::Inside
        } else if value.lo > threshold.hi {
            Verdict::Outside
        } else {
            Verdict::Ambiguous
        }
    }
    fn to_f64(&self, a: &Interval) -> f64 {
        a.mid()
    }
    fn to_decimal(&self, a: &Interval) -> String {
        format!("[{:e}, {:e}]", a.lo, a.hi)
    }
}
