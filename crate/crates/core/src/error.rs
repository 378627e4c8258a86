use thiserror::Error;

/// Why a single line of a table file was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected 3 or 4 TAB-separated fields, found {0}")]
    FieldCount(usize),
    #[error("unknown context class `{0}`")]
    InvalidContext(String),
    #[error("invalid escape sequence `{0}`")]
    InvalidEscape(String),
    #[error("invalid priority `{0}`")]
    InvalidPriority(String),
    #[error("empty {0} field")]
    EmptyField(&'static str),
    #[error("malformed directive `{0}`")]
    InvalidDirective(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid UTF-8 at byte offset {offset}")]
    Encoding { offset: usize },

    #[error("table line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("unknown character {ch:?} (U+{:04X}) at byte offset {offset}", *ch as u32)]
    UnknownChar { offset: usize, ch: char },

    #[error("unknown character {ch:?} (U+{:04X}) at line {line}, column {column}", *ch as u32)]
    UnknownCharAt { line: usize, column: usize, ch: char },

    #[error("table rejected: {0}")]
    InvalidTable(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
