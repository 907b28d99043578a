use thiserror::Error;

/// Errors produced by validation, evaluation and search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is empty")]
    EmptyVector,
    #[error("vector has {len} entries, more than the supported maximum of {max}")]
    TooLong { len: usize, max: usize },
    #[error("entry {0} is not finite")]
    NonFiniteEntry(usize),
    #[error("entry {0} is negative")]
    NegativeEntry(usize),
    #[error("weight {0} is not a finite positive number")]
    InvalidWeight(usize),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("exponent {0} is out of range")]
    ExponentOutOfRange(f64),
    #[error("exponents (p={p}, q={q}) violate the required regime: {expected}")]
    RegimeViolation { p: f64, q: f64, expected: &'static str },
    #[error("dominance violated at index {0}")]
    DominanceViolation(usize),
    #[error("argument {value} lies outside the domain {domain}")]
    DomainError { value: f64, domain: &'static str },
    #[error("t={0} lies within the exclusion radius of a breakpoint")]
    AtBreakpoint(f64),
    #[error("{n} entries exceed the exhaustive-enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("grid of {0} points is too coarse")]
    GridTooCoarse(usize),
    #[error("empty grid")]
    EmptyGrid,
    #[error("inequality {id} requires {required} inputs but the sampler produces {provided}")]
    ConstraintMismatch {
        id: &'static str,
        required: &'static str,
        provided: &'static str,
    },
    #[error("invalid sample specification: {0}")]
    InvalidSampleSpec(String),
    #[error("invalid tolerance policy: rel_tol={rel_tol}, borderline_band={borderline_band}")]
    InvalidTolerance { rel_tol: f64, borderline_band: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
