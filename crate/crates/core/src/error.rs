//! Crate-wide error type.

use thiserror::Error;

use crate::recommend::DataKind;

/// Errors produced by rating-matrix construction, model fitting and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate rating for user `{user}`, item `{item}`")]
    DuplicateEntry { user: String, item: String },

    #[error("non-finite rating {value} for user `{user}`, item `{item}`")]
    InvalidRating {
        user: String,
        item: String,
        value: f64,
    },

    #[error("input contains no ratings")]
    EmptyInput,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("similarity measure `{measure}` is not defined for {kind} data")]
    InvalidMeasure { measure: String, kind: String },

    #[error("unknown algorithm `{name}` for {kind} data")]
    UnknownAlgorithm { name: String, kind: DataKind },

    #[error("algorithm `{name}` for {kind} data is already registered")]
    AlreadyRegistered { name: String, kind: DataKind },

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParam { name: String, message: String },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("wrong result mode: {0}")]
    WrongMode(String),

    #[error("unknown user label `{0}`")]
    UnknownUser(String),

    #[error("unknown item label `{0}`")]
    UnknownItem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_param(name: &str, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.to_string(),
            message: message.into(),
        }
    }
}
