use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),
    #[error("cannot delete an element from a permutation of size {0}")]
    Underflow(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("enumeration budget exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}
