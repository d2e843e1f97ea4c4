use thiserror::Error;

use crate::diagram::Violation;
use crate::scalars::ParamId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("parameter {0} is not bound")]
    Unbound(ParamId),
    #[error("parameter {0} is not legal in this parameter mode")]
    IllegalParam(ParamId),
    #[error("algebra mismatch: {0}")]
    Mismatch(String),
    #[error("invalid diagram: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
