use thiserror::Error;

/// Errors produced by toruslab computations.
///
/// Input validation failures are separated from numerical failures so the
/// CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix not in GL(n,Z): det = {det}")]
    NotUnimodular { det: i64 },

    #[error("shear frequency must vanish on its own axis: m[{axis}] = {value}")]
    ShearFrequencyOnAxis { axis: usize, value: i64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {degree} out of range for dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("overflow at orbit step {step}: {context}")]
    OrbitOverflow { step: usize, context: String },

    #[error("re-orthonormalization failure at step {step}: diagonal entry {value}")]
    QrDegenerate { step: usize, value: f64 },

    #[error("degenerate splitting, unresolved exponents: {exponents:?} (gap threshold {threshold})")]
    DegenerateSplitting { exponents: Vec<f64>, threshold: f64 },

    #[error("metric series diverges on block {block} (exponent {exponent}): terms not decaying at n = {n}")]
    MetricDivergence { block: usize, exponent: f64, n: usize },

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("system spec: {0}")]
    SpecParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
