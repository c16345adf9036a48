use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("invalid letter {0}: must be a nonzero puncture index")]
    InvalidLetter(i64),
    #[error("multicurve components must be essential (nonempty words)")]
    TrivialComponent,
    #[error("invalid puncture subset {subset:?} for {n} punctures")]
    InvalidSubset { subset: Vec<u8>, n: usize },
    #[error("empty monomial cannot be drawn as a diagram")]
    EmptyMonomial,
    #[error("invalid offset schedule: {0}")]
    InvalidSchedule(String),
    #[error("could not reach a generic diagram: {0}")]
    Genericity(String),
    #[error("operation requires n = 4 punctures, got {0}")]
    WrongPunctureCount(usize),
}
