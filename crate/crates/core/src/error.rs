use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lattice truncation needs {needed} terms, cap is {cap}")]
    TruncationCapExceeded { needed: u128, cap: u128 },

    #[error("invalid truncation radius {0} (must be >= 1)")]
    InvalidRadius(u32),

    #[error("period matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("imaginary part of the period matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{0} is not a listed pole of the form")]
    NotAPole(String),

    #[error("pole {pole} has multiplicity {multiplicity}; a simple pole is required")]
    NotSimplePole { pole: String, multiplicity: u32 },

    #[error("form has a pole at infinity")]
    PoleAtInfinity,

    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),

    #[error("point {0} is the pole of the Baker-Akhiezer function")]
    AtDivisor(String),

    #[error("theta denominator |{0:e}| below threshold (divisor degeneracy)")]
    DegenerateDivisor(f64),

    #[error("degenerate immersion point: {0}")]
    Degenerate(String),

    #[error("frame is not unitary (|det| - 1 = {0:e})")]
    NotLagrangian(f64),

    #[error("ill-conditioned basis (condition number {0:e})")]
    IllConditioned(f64),

    #[error("curve and jet do not match (phi deviation {0:e})")]
    CurveJetMismatch(f64),

    #[error("zero vector has no point in CP^2")]
    ZeroVector,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
