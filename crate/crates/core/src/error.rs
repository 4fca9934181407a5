use thiserror::Error;

use crate::graph::{Pos, PresentationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("ball would have {needed} nodes, over the cap of {cap}")]
    CapExceeded { needed: u64, cap: usize },
    #[error("position {0} is out of range")]
    OutOfRange(Pos),
    #[error("radius mismatch: {0}")]
    RadiusMismatch(String),
    #[error("no plateau of b(n) at or below radius {0}")]
    NotPeriodic(usize),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("word contains the forbidden factor {factor:?} at index {index}")]
    ForbiddenFactor { factor: String, index: i64 },
    #[error("factor count grew from {small} to {large} when the window doubled")]
    Unstable { small: usize, large: usize },
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("inconsistent census: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
