use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("context {context}: {msg}")]
    Plugin { context: String, msg: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Structural(_) => "structural",
            Error::Capability(_) => "capability",
            Error::Plugin { .. } => "plugin",
            Error::Precondition(_) => "precondition",
            Error::Overflow(_) => "overflow",
        }
    }

    pub(crate) fn plugin(context: &str, msg: impl Into<String>) -> Self {
        Error::Plugin { context: context.to_string(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
