use thiserror::Error;

/// Errors produced by the simulators and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("capacity exceeded: {what} needs dimension {requested}, cap is {cap}")]
    Capacity {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("numeric overflow: {0}")]
    NumericOverflow(String),
    #[error("truncation not converged: {0}")]
    NotConverged(String),
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("oracle at truncation {dim}: {source}")]
    Oracle {
        dim: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// The underlying error, with any oracle context removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Oracle { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
