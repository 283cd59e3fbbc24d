use thiserror::Error;

/// Errors reported by the library.
///
/// `BudgetExceeded` is kept separate from `Domain` so callers (notably the
/// CLI) can map it to a distinct exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Domain(String),

    #[error("budget exceeded: {needed} needed, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
