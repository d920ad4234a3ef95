use thiserror::Error;

use crate::formula::Var;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("clause contains both {0} and its negation")]
    ComplementaryPair(Var),

    #[error("variable {0} is not in the formula universe")]
    OutsideUniverse(Var),

    #[error("the incidence graph of the formula contains a cycle")]
    NotAcyclic,

    #[error("clause width {width} exceeds r = {r}")]
    WidthExceeded { width: usize, r: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),

    #[error("{0:?} is not a strong backdoor set")]
    NotStrongBackdoor(Vec<Var>),
}

impl Error {
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::ResourceGuard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
