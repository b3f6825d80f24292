use thiserror::Error;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unstable pair (g={g}, n={n}): 2g-2+n must be positive")]
    UnstablePair { g: u32, n: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("numerator does not vanish on z = -w (degree {degree}); not divisible by z+w")]
    NonDivisible { degree: usize },

    #[error("R-matrix fails the symplectic condition at order {order}")]
    NonSymplectic { order: usize },

    #[error("pairing matrix is singular")]
    SingularPairing,

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series variable mismatch: {left} vs {right}")]
    VariableMismatch { left: char, right: char },

    #[error("R-matrix truncated at order {have}, but order {need} is required")]
    InsufficientOrder { have: usize, need: usize },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("partition sizes differ: {left} vs {right}")]
    SizeMismatch { left: u32, right: u32 },

    #[error("invalid theory data: {0}")]
    InvalidTheory(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
