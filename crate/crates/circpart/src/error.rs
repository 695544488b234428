//! Error type shared across the crate.

use std::fmt;

/// Errors reported by geometry, construction, and verification routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the operation's domain.
    InvalidArgument(String),
    /// The inputs are geometrically degenerate for the requested operation.
    Degenerate(String),
    /// The requested configuration cannot exist (ratio too small, empty bracket).
    Infeasible(String),
    /// `next_gap_state` was called on a gap that is already covered.
    AlreadyTerminated,
    /// Grid growth left unlabeled cells.
    GrowthStalled(String),
    /// File or serialization failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
            Error::Degenerate(msg) => write!(f, "{msg}"),
            Error::Infeasible(msg) => write!(f, "{msg}"),
            Error::AlreadyTerminated => write!(f, "already terminated"),
            Error::GrowthStalled(msg) => write!(f, "{msg}"),
            Error::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
