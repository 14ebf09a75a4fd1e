use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    /// An integer elimination step left the `i64` range.
    #[error("integer overflow during lattice reduction")]
    Overflow,

    #[error("pentuple rejected: {0}")]
    Rejected(String),

    /// One of the identities that must hold along a reduction failed.
    #[error("internal inconsistency in `{identity}` at {witness}")]
    InternalInconsistency { identity: String, witness: String },

    /// The synthesized pentuple did not pass its own validation.
    #[error("convention discrepancy: {0}")]
    ConventionDiscrepancy(String),

    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
