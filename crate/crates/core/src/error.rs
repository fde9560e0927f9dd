use crate::Cx;

/// Errors raised by evaluation, construction and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("division by a value near zero (|x| = {0:e})")]
    DivisionNearZero(f64),

    #[error("evaluation radius {radius} exceeds the admissible radius {limit}")]
    RadiusExceeded { radius: f64, limit: f64 },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("non-finite value produced")]
    NonFinite,

    #[error("degenerate point {0}: derivative of the dilatation vanishes")]
    DegenerateAtPoint(Cx),

    #[error("degenerate Möbius map (|ad - bc| = {0:e})")]
    DegenerateMobius(f64),

    #[error("Möbius map evaluated at its pole {0}")]
    PoleHit(Cx),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Möbius fit residual {residual:e} exceeds {tolerance:e}")]
    FitMismatch { residual: f64, tolerance: f64 },

    #[error("fitted Möbius map is not a disk automorphism (circle residual {residual:e})")]
    NotDiskAutomorphism { residual: f64 },

    #[error("-(ln J)_zz̄ = {value:e} at {point} is not positive")]
    NegativeInnerValue { point: Cx, value: f64 },

    #[error("family member is not sense-preserving")]
    SenseReversed,

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
