use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants are grouped by the operation family that raises them. The CLI
/// maps them onto exit codes via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration is empty")]
    EmptyConfig,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("vector {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector {index} has norm {norm} which violates the {mode} norm constraint (tolerance {tolerance})")]
    NormViolation {
        index: usize,
        norm: f64,
        mode: &'static str,
        tolerance: f64,
    },
    #[error("sign vector has length {found}, configuration has {expected} vectors")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid sign value {value} at index {index}")]
    InvalidSign { index: usize, value: i64 },
    #[error("coefficient {value} at index {index} lies outside [-1, 1]")]
    CoefficientOutOfBox { index: usize, value: f64 },

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("radius must be finite and nonnegative, got {0}")]
    InvalidRadius(f64),
    #[error("{count} sign assignments straddle the classification threshold (first: {example})")]
    AmbiguousClassification { count: u64, example: String },

    #[error("{name} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("vectors {i} and {j} have |<x_i, x_j>| = {inner} > delta = {delta}")]
    NotAlmostOrthogonal {
        i: usize,
        j: usize,
        inner: f64,
        delta: f64,
    },
    #[error("column matrix is numerically singular (smallest singular value {0})")]
    SingularInput(f64),
    #[error("plane basis is degenerate (|<u, w>| = {0})")]
    DegeneratePlane(f64),

    #[error("the construction needs an odd number of vectors, got {0}")]
    EvenN(usize),
    #[error("precision `{policy}` cannot resolve the classification margin {margin:e} at n = {n}")]
    PrecisionInsufficient {
        n: usize,
        margin: f64,
        policy: String,
    },
    #[error("v3 and v4 are not orthogonal (<v3, v4> = {0})")]
    NotOrthogonal(f64),
    #[error("configuration is not tight: minimum signed norm {0} differs from sqrt(2)")]
    NotTight(f64),

    #[error("null-space residual {0:e} exceeds 1e-8")]
    NumericalNullspaceFailure(f64),
    #[error("vectors {i} and {j} form an oblique pair (|inner| = {inner})")]
    ObliquePairPresent { i: usize, j: usize, inner: f64 },
    #[error("near-parallel relation is not transitive on ({i}, {j}, {k})")]
    TransitivityViolation { i: usize, j: usize, k: usize },
    #[error("found {count} clusters in dimension {dim}")]
    TooManyClusters { count: usize, dim: usize },
    #[error("n = {n} and d = {d} have the same parity")]
    ParityMismatch { n: usize, d: usize },
    #[error("vector {index} projects onto the plane with length {length} > {bound}")]
    ProjectionTooLong {
        index: usize,
        length: f64,
        bound: f64,
    },
    #[error("pair is not oblique: |inner| = {inner}, alpha = {alpha}")]
    NotOblique { inner: f64, alpha: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    ///
    /// 2 for input validation failures, 3 for precision refusals, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionInsufficient { .. } | Error::AmbiguousClassification { .. } => 3,
            Error::EmptyConfig
            | Error::ZeroDimension
            | Error::DimensionMismatch { .. }
            | Error::NormViolation { .. }
            | Error::LengthMismatch { .. }
            | Error::InvalidSign { .. }
            | Error::CoefficientOutOfBox { .. }
            | Error::TooLarge { .. }
            | Error::InvalidRadius(_)
            | Error::OutOfRange { .. }
            | Error::EvenN(_)
            | Error::NotOrthogonal(_)
            | Error::NotTight(_)
            | Error::ParityMismatch { .. }
            | Error::InvalidParameter(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}
