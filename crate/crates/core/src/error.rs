use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 2..=24")]
    DegreeOutOfRange(u32),
    #[error("reduction polynomial {poly:#x} is not monic of degree {n}")]
    NotMonic { poly: u64, n: u32 },
    #[error("reduction polynomial {poly:#x} is reducible (divisible by {factor:#x})")]
    NotIrreducible { poly: u64, factor: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("GF(2^{m}) is not a subfield of GF(2^{n})")]
    NotASubfield { n: u32, m: u32 },
    #[error("GF(2^{0}) has no GF(4) subfield (degree is odd)")]
    NoGF4Subfield(u32),
    #[error("field degree {n} exceeds the configured cap {cap} for this computation")]
    SizeCapExceeded { n: u32, cap: u32 },
    #[error("exponent {exponent} is not coprime to 2^{n}-1")]
    NotCoprime { exponent: String, n: u32 },
    #[error("transform length {0} is not a power of two")]
    BadLength(usize),
    #[error("function is not quadratic")]
    NotQuadratic,
    #[error("count {count} of value 2^n is not a power of two")]
    NonPowerOfTwoCount { count: u64 },
    #[error("value count {count} is not divisible by 2^{dk}")]
    DivisibilityBreach { count: u64, dk: u32 },
    #[error("function is not two-to-one: the fiber over {image:#x} has {size} preimages (witness x = {witness:#x})")]
    NotTwoToOne { image: u32, witness: u32, size: u64 },
    #[error("moment system is singular")]
    SingularSystem,
    #[error("moment system has a non-integral solution")]
    NonIntegralSolution,
    #[error("moment system has a negative solution")]
    NegativeSolution,
    #[error("f(0) must be 0 for the code constructions")]
    NonZeroAtZero,
    #[error("cubic has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial has no root in the field")]
    NoRootInField,
    #[error("quartic coefficients a0*a1 must be nonzero")]
    DegenerateCoefficients,
    #[error("constraint violated for {family}: {condition}")]
    ConstraintViolation { family: String, condition: String },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn violation(family: impl Into<String>, condition: impl Into<String>) -> Error {
    Error::ConstraintViolation {
        family: family.into(),
        condition: condition.into(),
    }
}
