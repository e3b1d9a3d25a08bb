use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("unsupported characteristic p = {p}: {reason}")]
    UnsupportedCharacteristic { p: u64, reason: &'static str },

    #[error("degenerate parameter: {0}")]
    Degenerate(String),

    #[error("parameter relation violated: {0}")]
    Relation(String),

    #[error("invalid field element: {0}")]
    InvalidElement(String),

    #[error("exponent triple ({i}, {j}, {k}) does not have total degree {expected}")]
    DegreeMismatch {
        i: u64,
        j: u64,
        k: u64,
        expected: u64,
    },

    #[error("{what} exceeds the brute-force guard ({value} > {limit})")]
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("non-integral exponent: {0}")]
    Integrality(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input violates a structural invariant (bad prime, bad relation, ...).
    Invariant,
    /// A parameter is degenerate (zero coefficient).
    Degenerate,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Degenerate(_) => ErrorKind::Degenerate,
            _ => ErrorKind::Invariant,
        }
    }
}
