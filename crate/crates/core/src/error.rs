use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("scalars from different fields: Q(2cos(pi/{left})) and Q(2cos(pi/{right}))")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular system: {0}")]
    Singular(String),

    /// Knitting or pivoting reached a state that cannot occur for valid input.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("polytope is not simple at {0}")]
    NonSimple(String),

    #[error("polytope is unbounded: edge ray from {0} meets no facet")]
    Unbounded(String),

    #[error("plane has deficient dimension: {0}")]
    DimensionDeficiency(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 verification failure, 2 invalid input, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::InvalidInput(_) | Error::Io { .. } | Error::Json(_) => 2,
            Error::DimensionDeficiency(_) => 2,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::FieldMismatch { .. } => "field_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::Singular(_) => "singular",
            Error::Structural(_) => "structural",
            Error::NonSimple(_) => "non_simple",
            Error::Unbounded(_) => "unbounded",
            Error::DimensionDeficiency(_) => "dimension_deficiency",
            Error::Verification(_) => "verification",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
