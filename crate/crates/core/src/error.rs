use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// A named precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An algebraic structure expected by the operation is missing
    /// (inexact division, broken quotient chain, ...).
    #[error("structure error: {0}")]
    Structure(String),
    /// The computation would exceed the configured budget.
    #[error("resource limit exceeded: {what} needs {required}, budget is {budget}")]
    Resource {
        what: String,
        required: u128,
        budget: u128,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
