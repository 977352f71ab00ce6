use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the domain of an operation (empty vertex set, unknown vertex, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A search or enumeration would exceed its configured cap.
    #[error("capacity exceeded: {what} is {actual}, cap is {cap}")]
    Capacity {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction failed one of the identities it is supposed to satisfy.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("format error on line {line}: {msg}")]
    Format { line: usize, msg: String },
}

impl Error {
    pub(crate) fn capacity(what: &'static str, actual: usize, cap: usize) -> Self {
        Error::Capacity { what, actual, cap }
    }

    pub fn is_capacity(&self) -> bool {
        match self {
            Error::Capacity { .. } => true,
            Error::Trial { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}
