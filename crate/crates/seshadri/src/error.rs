use num_bigint::BigInt;
use std::fmt;

/// Errors shared by the whole crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Division by the zero element of Q(√e).
    DivisionByZero,
    /// Two surds with different radicands were combined.
    MixedContext { left: u64, right: u64 },
    /// A Pell equation x² − D·y² = N was requested for square (or < 2) D.
    SquareDiscriminant(BigInt),
    /// `normalize` needs a class with positive L₀-coordinate.
    NotNormalizable,
    /// √(L²) is rational, so the class carries no Pell bound.
    SquareSelfIntersection,
    /// The class is not ample for the given order.
    NotAmple,
    /// Interval length passed to the denominator bound must be positive.
    NonpositiveLength,
    /// Invalid sweep range (empty, or not inside the ample interval).
    InvalidRange,
    /// e_n = 1 + 8n² is a perfect square, so no order exists.
    SquareE(u64),
    /// Malformed input (CLI or classification preconditions).
    BadInput(String),
    /// An internal invariant was violated; this is a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::MixedContext { left, right } => {
                write!(f, "mixed surd contexts: √{left} vs √{right}")
            }
            Error::SquareDiscriminant(d) => {
                write!(f, "Pell equation needs a non-square D ≥ 2, got {d}")
            }
            Error::NotNormalizable => write!(f, "class has non-positive L0-coordinate"),
            Error::SquareSelfIntersection => {
                write!(f, "√(L²) is rational: no Pell bound exists for this class")
            }
            Error::NotAmple => write!(f, "class is not ample"),
            Error::NonpositiveLength => write!(f, "interval length must be positive"),
            Error::InvalidRange => write!(f, "invalid range"),
            Error::SquareE(n) => write!(f, "1 + 8·{n}² is a perfect square"),
            Error::BadInput(msg) => write!(f, "bad input: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
