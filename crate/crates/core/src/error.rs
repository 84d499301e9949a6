use thiserror::Error;

/// Errors produced by the holoris library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A geometry or experiment description is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A linear system could not be solved reliably.
    #[error("singular system in {context} (condition number {condition:.3e})")]
    Singular { context: String, condition: f64 },

    /// A computed quantity failed an internal consistency check.
    #[error("numerical consistency error: {0}")]
    Numerical(String),

    /// The eigenvalue knee is not defined for the given spectrum.
    #[error("knee undefined: {0}")]
    KneeUndefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
