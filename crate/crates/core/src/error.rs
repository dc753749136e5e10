use thiserror::Error;

/// Errors raised by ring, module and K-theory constructions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A label or module element that does not belong to the structure it was passed to.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid construction parameters (e.g. `O+(1)`).
    #[error("construction error: {0}")]
    Construction(String),
    /// Text input that could not be parsed; `pos` is a byte offset.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// The requested operation is not available for this group.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A search exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A hard invariant failed during a computation.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
