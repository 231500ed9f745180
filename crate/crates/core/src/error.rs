use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value lies outside the domain of the quantity it represents.
    #[error("{field} {reason}")]
    Domain { field: String, reason: String },

    /// Two inputs are individually valid but cannot be combined.
    #[error("{0}")]
    Contract(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Malformed scenario document, addressed by line and column.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    /// Prefixes the field path of a domain error, e.g. `beta` becomes
    /// `periods[2].beta`. Other variants pass through unchanged.
    pub(crate) fn within(self, prefix: &str) -> Self {
        match self {
            Error::Domain { field, reason } => Error::Domain {
                field: format!("{prefix}.{field}"),
                reason,
            },
            other => other,
        }
    }
}
