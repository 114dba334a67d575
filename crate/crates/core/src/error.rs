use thiserror::Error;

use crate::padic::PadicError;
use crate::tree::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("no fixed point reached after {iterations} iterations")]
    NotConverged { iterations: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid boundary field: {0}")]
    InvalidField(String),
    #[error("denominator of F_{component} vanishes at working precision")]
    ZeroDenominator { component: u32 },
}

impl Error {
    /// Whether the failure is a resource or convergence limit rather than
    /// bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::Padic(PadicError::NotConverged { .. })
                | Error::Tree(TreeError::CapExceeded { .. })
                | Error::Tree(TreeError::TooManyVertices { .. })
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
