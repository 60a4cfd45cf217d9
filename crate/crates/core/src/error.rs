use thiserror::Error;

use crate::index::MultiIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero multi-index has no radial projection")]
    ZeroIndexNotProjectable,
    #[error("multi-index degree overflows 64 bits")]
    DegreeOverflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid simplex direction: {0}")]
    InvalidDirection(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("series is not elementary: tail projections span l1 diameter {diameter:.4} > 0.2")]
    NotElementary { diameter: f64 },
    #[error("the half-space system has no feasible point")]
    EmptyDomain,
    #[error("no supported index falls inside the requested window")]
    EmptyWindow,
    #[error("support value is +inf in direction {direction:?}")]
    InfiniteSupport { direction: Vec<f64> },
    #[error("a wedge decomposition needs at least two directions")]
    NeedTwoDirections,
    #[error("series supports overlap at index {index}")]
    SupportsOverlap { index: MultiIndex },
}

pub type Result<T> = std::result::Result<T, Error>;
