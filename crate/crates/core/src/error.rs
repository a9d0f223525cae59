//! Error type shared by all modules of the engine.

use std::fmt;

/// Errors produced by polynomial arithmetic, seed mutation and orbit
/// generation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Two operands index their variables with different tables.
    VarTableMismatch,
    /// Division by the zero polynomial or the zero rational function.
    DivisionByZero,
    /// Exact division was requested but no quotient exists in the ring.
    NotDivisible,
    /// A value with a negative exponent was specialized to zero.
    SingularSubstitution,
    /// A value with a negative exponent was specialized to a non-invertible
    /// element of the Laurent ring.
    NonInvertibleSubstitution,
    /// A numeric orbit or mutation hit a forbidden value (zero denominator,
    /// coefficient equal to 0 or -1 where an inverse is required).
    SingularityEncountered(String),
    /// An operation that requires a nonzero polynomial received zero.
    ZeroOperand(&'static str),
    /// A direction or orbit index outside the valid range.
    IndexOutOfRange { index: i64, limit: usize },
    /// The symbolic term budget was exhausted.
    BudgetExceeded { used: usize, limit: usize },
    /// Malformed input (CLI arguments, JSON payloads, bad parameters).
    Usage(String),
    /// An internal consistency check failed; this indicates an engine bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VarTableMismatch => write!(f, "operands use different variable tables"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotDivisible => write!(f, "exact division failed: not divisible"),
            Error::SingularSubstitution => {
                write!(f, "substituted zero into a negatively-exponentiated variable")
            }
            Error::NonInvertibleSubstitution => write!(
                f,
                "substituted a non-invertible value into a negatively-exponentiated variable"
            ),
            Error::SingularityEncountered(what) => write!(f, "singularity encountered: {what}"),
            Error::ZeroOperand(op) => write!(f, "{op} requires a nonzero argument"),
            Error::IndexOutOfRange { index, limit } => {
                write!(f, "index {index} out of range (limit {limit})")
            }
            Error::BudgetExceeded { used, limit } => {
                write!(f, "term budget exceeded: {used} terms used, limit {limit}")
            }
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
