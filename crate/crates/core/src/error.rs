use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Broad classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// An argument lies outside the domain of the operation.
    Domain,
    /// A value falls outside the attainable range (e.g. `p ≥ 1` for a quantile).
    Range,
    /// Structural validation of an input failed.
    Validation,
    /// A state or outcome is missing from a model or act.
    Lookup,
    /// A preference oracle answered inconsistently with the query protocol.
    Protocol,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Domain(String),
    /// Range error, carrying the offending value.
    Range { message: String, value: f64 },
    Validation(String),
    Lookup(String),
    Protocol(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) => ErrorKind::Domain,
            Error::Range { .. } => ErrorKind::Range,
            Error::Validation(_) => ErrorKind::Validation,
            Error::Lookup(_) => ErrorKind::Lookup,
            Error::Protocol(_) => ErrorKind::Protocol,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>, value: f64) -> Self {
        Error::Range { message: msg.into(), value }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn lookup(msg: impl Into<String>) -> Self {
        Error::Lookup(msg.into())
    }

    pub(crate) fn protocol(msg: impl Into<String>) -> Self {
        Error::Protocol(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Range { message, value } => write!(f, "range error: {message} (value {value})"),
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Lookup(m) => write!(f, "lookup error: {m}"),
            Error::Protocol(m) => write!(f, "protocol error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
