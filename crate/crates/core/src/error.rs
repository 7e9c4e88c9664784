use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured enumeration cap would be exceeded. Refusals are never
    /// silent truncations.
    #[error("refused: {what} is {value}, above the cap of {cap} (raise it with {flag})")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
        flag: &'static str,
    },

    /// Malformed input text.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
