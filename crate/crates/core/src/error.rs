use thiserror::Error;

use crate::gallery::GalleryError;
use crate::words::WordsError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Words(#[from] WordsError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error("scale is not divisible at level {level}")]
    DivisibilityViolation { level: usize },
    #[error("level has no holes")]
    NoHoles,
    #[error("schedule is not certified Oxtoby")]
    NotOxtoby,
    #[error("branch carries no isolation certificate: {0}")]
    NotIsolated(String),
    #[error("window not resolved: {0}")]
    UnresolvedWindow(String),
    #[error("element not resolved: {0}")]
    UnresolvedElement(String),
    #[error("level {0} has more than one hole per period")]
    NotSingleHole(usize),
    #[error("code radius {radius} too large for period {period}")]
    RadiusTooLarge { radius: usize, period: usize },
    #[error("letters are not distinct members of the alphabet")]
    UnknownLetters,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
