use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A malformed request, such as an unknown identity id or an empty selection.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot parse {input:?} as {expected}")]
    Parse {
        input: String,
        expected: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
