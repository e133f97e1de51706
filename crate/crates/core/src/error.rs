use thiserror::Error;

use crate::fields::FieldError;
use crate::hopf::HopfError;
use crate::linalg::LinalgError;
use crate::pell::PellError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("oracle bound {0} is out of range")]
    OracleBound(u64),
    /// A generator formula or prescreen disagreed with the determinant test.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Bad user input, as opposed to a failure of the theory or the code.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Inconsistent(_) | Error::Linalg(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(_) => "field",
            Error::Pell(_) => "pell",
            Error::Hopf(_) => "hopf",
            Error::Linalg(_) => "linalg",
            Error::OracleBound(_) => "oracle_bound",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
