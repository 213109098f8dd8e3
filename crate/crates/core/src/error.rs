use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// `Validation`-class errors mean the inputs could never work (bad spec,
/// unknown name, malformed formula); `Runtime`-class errors mean the inputs
/// were plausible but failed on the actual data (missing column, single-level
/// factor, I/O). The CLI maps the two classes to exit codes 1 and 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("formula syntax error at position {position}: {message}")]
    FormulaSyntax { position: usize, message: String },

    #[error("unknown baseline distribution `{name}`; known: {known}")]
    UnknownBaseline { name: String, known: String },

    #[error("baseline `{name}` is already registered")]
    DuplicateBaseline { name: String },

    #[error("invalid parameter `{name}` for `{context}`: {message}")]
    InvalidParameter {
        context: String,
        name: String,
        message: String,
    },

    #[error("invalid scenario at `{path}`: {message}")]
    InvalidScenario { path: String, message: String },

    #[error("column `{name}` not found")]
    MissingColumn { name: String },

    #[error("column `{name}`: {message}")]
    BadColumn { name: String, message: String },

    #[error("length mismatch: {message}")]
    LengthMismatch { message: String },

    #[error("domain error: {message}")]
    Domain { message: String },

    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("scenario json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain {
            message: message.into(),
        }
    }

    pub fn invalid_scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidScenario {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors that indicate a spec that could never run
    /// (as opposed to a failure on the given data or environment).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::FormulaSyntax { .. }
                | Error::UnknownBaseline { .. }
                | Error::DuplicateBaseline { .. }
                | Error::InvalidParameter { .. }
                | Error::InvalidScenario { .. }
                | Error::Json(_)
        )
    }
}
