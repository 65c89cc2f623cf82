use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    Domain(String),
    /// A computation would exceed its configured budget.
    Resource { product: u64, budget: u64 },
    /// An operation specific to one present-bias regime was called in the other.
    Regime(String),
    /// An iterative solver failed to reach its tolerance.
    Convergence { iterations: u32 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Resource { product, budget } => write!(
                f,
                "resource error: T * n_points = {product} exceeds the evaluation budget {budget}"
            ),
            Error::Regime(msg) => write!(f, "regime error: {msg}"),
            Error::Convergence { iterations } => {
                write!(f, "convergence error: tolerance not reached after {iterations} iterations")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
