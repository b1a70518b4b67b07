use thiserror::Error;

/// Coarse classification used by callers that must map failures onto
/// process exit codes (input = 2, capacity = 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Capacity,
    Search,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("cayley table is not associative: ({a} * {b}) * {c} != {a} * ({b} * {c})")]
    NotAssociative { a: u32, b: u32, c: u32 },

    #[error("cayley table is not a latin square: {what} {index} has a repeated entry")]
    NotLatinSquare { what: &'static str, index: u32 },

    #[error("declared identity {identity} does not act as identity on element {witness}")]
    BadIdentity { identity: u32, witness: u32 },

    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: u32 },

    #[error("sets belong to different groups")]
    GroupMismatch,

    #[error("map is not well defined on element {element}: representations disagree ({lhs} vs {rhs})")]
    NotWellDefined { element: u32, lhs: String, rhs: String },

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Input(_)
            | Error::NotAssociative { .. }
            | Error::NotLatinSquare { .. }
            | Error::BadIdentity { .. }
            | Error::NoInverse { .. }
            | Error::GroupMismatch
            | Error::NotWellDefined { .. } => ErrorKind::Input,
            Error::Capacity(_) => ErrorKind::Capacity,
            Error::SearchFailure(_) => ErrorKind::Search,
            Error::Internal(_) => ErrorKind::Internal,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
