use num_bigint::{BigInt, BigUint};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A hypothesis of some identity or period statement that the supplied
/// parameters do not satisfy. Reported, never asserted.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Precondition {
    #[error("gcd({left}, {right}) = {gcd}, expected 1")]
    NotCoprime { left: BigInt, right: BigInt, gcd: BigUint },
    #[error("T = {t} is not a multiple of nu = {nu}")]
    NotMultipleOfNu { t: BigUint, nu: BigUint },
    #[error("base a = {a} is inadmissible for m = {m}, q = {q}")]
    Inadmissible { a: BigInt, m: usize, q: BigUint },
    #[error("m = {m} must be even")]
    OddClassModulus { m: usize },
    #[error("{p} is not an odd prime")]
    NotOddPrime { p: BigUint },
    #[error("m = {m} does not divide p - 1 for prime divisor p = {p}")]
    ClassModulusNotDividingPMinusOne { m: usize, p: BigUint },
    #[error("{what} must be in range {range}, got {value}")]
    OutOfRange {
        what: &'static str,
        range: &'static str,
        value: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input to a primitive (e.g. factorizing 1, mismatched rings).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(#[from] Precondition),
    /// Two computations that must agree did not. Always a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}
