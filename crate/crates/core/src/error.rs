use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },

    #[error("{0}")]
    Input(String),

    #[error("protocol error at state `{state}`: agent `{agent}` cannot play `{action}`")]
    Protocol {
        state: String,
        agent: String,
        action: String,
    },

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dialect violation: {0}")]
    Dialect(String),

    #[error("compile error: {0}")]
    Compile(String),

    #[error("ill-formed vCGS: {0}")]
    IllFormed(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("state bound {bound} exceeded during unfolding")]
    BoundExceeded { bound: usize },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors caused by exhausting an explicit resource cap.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. } | Error::Resource(_))
    }
}
