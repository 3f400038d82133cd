//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("pattern and term share variables: {shared:?}")]
    SharedVariables { shared: Vec<String> },

    #[error("invalid position {position} in {term}")]
    InvalidPosition { position: String, term: String },

    #[error("no redex at position {position} in {term}")]
    NotARedex { position: String, term: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inputs do not compose: {0}")]
    NotComposable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
