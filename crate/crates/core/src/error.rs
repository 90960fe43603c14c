use thiserror::Error;

/// Errors raised by constructors and operations whose preconditions fail.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unimodular: det = {re} + {im}i")]
    NotUnimodular { re: f64, im: f64 },

    #[error("invalid conjugacy class: {0}")]
    InvalidClass(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("matrices do not commute (max deviation {0:e})")]
    NotCommuting(f64),

    #[error("short exact sequence rejected: {0}")]
    NotExact(String),

    #[error("complex is not acyclic: {0}")]
    NotAcyclic(String),

    #[error("invalid circle representation: {0}")]
    InvalidCircleRep(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid Seifert index: {0}")]
    InvalidSeifertIndex(String),

    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },

    #[error("not a Seifert fibered homology sphere: {0}")]
    NotHomologySphere(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(field: &str, message: impl Into<String>) -> Self {
        Error::Parse { field: field.to_string(), message: message.into() }
    }

    /// True for failures of the input syntax, as opposed to violated
    /// mathematical preconditions.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
