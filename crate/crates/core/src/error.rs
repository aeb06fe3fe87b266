use std::fmt;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy target not reached: {0}")]
    Accuracy(Bracket),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("no descent: {0}")]
    NoDescent(String),
    #[error("plan error: {0}")]
    Plan(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Best value reached by a computation that missed its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub best: f64,
    pub error: f64,
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "best {:e} with error estimate {:e}", self.best, self.error)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
