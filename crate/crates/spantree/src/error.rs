use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("generator {generator} reduces to 0 mod {modulus} (a loop); loops are rejected unless explicitly allowed")]
    LoopGenerator { generator: u64, modulus: u64 },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("spectrum has {count} zero eigenvalues; the eigenvalue-product route needs exactly one (use the determinant oracle for disconnected graphs)")]
    ZeroEigenvalueCount { count: usize },

    #[error("no unique integer isolated at {bits} bits of working precision")]
    PrecisionExhausted { bits: u32 },

    #[error("exact result would need about {bits} bits; use log mode instead")]
    DigitCapExceeded { bits: u64 },

    #[error("quadrature budget exhausted: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureBudget { achieved: f64, requested: f64 },

    #[error("series truncation budget exhausted at radius {radius}")]
    SeriesBudget { radius: usize },

    #[error("value too large for floating-point evaluation: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
