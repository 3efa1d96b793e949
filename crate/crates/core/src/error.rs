use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} limit exceeded: requested {requested}, maximum {max}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    #[error("table covers p(0..={limit}) but p({needed}) is required")]
    TableTooSmall { needed: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tail substitution {variant} needs n >= 2, got n = {n}")]
    InvalidVariant { variant: &'static str, n: usize },

    #[error("enumeration guard: m = {m} exceeds {max}")]
    EnumerationGuard { m: usize, max: usize },

    #[error("tail is not integral at n = {0}")]
    NonIntegralTail(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
