use thiserror::Error;

/// Location of a syntax error, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("group mismatch: {left} vs {right}")]
    SpecMismatch { left: String, right: String },

    #[error("syntax error at {location}: {message}")]
    Parse { location: Location, message: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid usage: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            location: Location { line, column },
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }

    pub(crate) fn spec_mismatch(left: impl ToString, right: impl ToString) -> Self {
        Error::SpecMismatch {
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
