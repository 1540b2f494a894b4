use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid concept {concept:?}: {reason}")]
    InvalidConcept { concept: String, reason: &'static str },

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("cannot encode {token:?}: {reason}")]
    Encoding { token: String, reason: String },

    #[error("cannot compile concept {concept:?}: {reason}")]
    Compile { concept: String, reason: String },

    #[error("lexicon is empty")]
    EmptyLexicon,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("distance variant mismatch: index uses {index}, query uses {query}")]
    VariantMismatch { index: String, query: String },

    #[error("training corpus must contain both IV and OOV records")]
    SingleClass,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn encoding(token: &str, reason: impl Into<String>) -> Self {
        Error::Encoding {
            token: token.to_string(),
            reason: reason.into(),
        }
    }
}
