use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },

    #[error("coordinate {index} out of range for a ground set of size {size}")]
    CoordinateOutOfRange { index: usize, size: usize },

    #[error("not a permutation of 0..{size}")]
    NotAPermutation { size: usize },

    #[error("requested dimension {k} exceeds ground set size {n}")]
    DimensionTooLarge { n: usize, k: usize },

    #[error("{what} = {value} exceeds the enumeration cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("Brown invariant undefined: q does not vanish on the bicycle space")]
    UndefinedInvariant,

    #[error("subspace is not pedestrian (bicycle dimension {d})")]
    NotPedestrian { d: usize },

    #[error("invalid q-basis: {0}")]
    InvalidQBasis(String),

    #[error("graph isomorphism undecided on {vertices} vertices (cap {cap})")]
    Undecided { vertices: usize, cap: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("at least one sample is required")]
    NoSamples,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
