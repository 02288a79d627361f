use thiserror::Error;

/// Errors raised by the geometric operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least 2 outcomes, got {0}")]
    TooFewOutcomes(usize),

    #[error("weight {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, not 1")]
    NotNormalized { sum: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tangent components are not centered: E_p(u) = {mean}")]
    NotCentered { mean: f64 },

    #[error("tangent vectors are based at different points")]
    BaseMismatch,

    #[error("double tangents have different foot points")]
    FootMismatch,

    #[error("basis is singular (condition number {condition:e})")]
    SingularBasis { condition: f64 },

    #[error("t = {t} is outside the curve domain [{lo}, {hi}]")]
    CurveDomain { t: f64, lo: f64, hi: f64 },

    #[error("trajectory left the open simplex at t = {t}")]
    LeftSimplex { t: f64 },

    #[error("finite-difference step {0} is outside [1e-8, 1e-2]")]
    InvalidStep(f64),

    #[error("point is outside the chart domain (|<u,z>| = {overlap:e})")]
    OutsideChart { overlap: f64 },

    #[error("vector is not orthogonal to the chart center (|<u,xi>| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("representative is not unit norm (|z| = {norm})")]
    NotUnitNorm { norm: f64 },

    #[error("representatives do not span the same complex line")]
    NotSameRay,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
