//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors produced by constructors, estimators and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence windows use different alphabets")]
    AlphabetMismatch,

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("scale must lie in (0, 1), got {0}")]
    ScaleOutOfRange(f64),

    #[error("kappa must lie in (0, 1), got {0}")]
    KappaOutOfRange(f64),

    #[error("duplicate labels in measure state set")]
    DuplicateStates,

    #[error("measure support has fewer than two distinct symbols")]
    DegenerateSupport,

    #[error("enumeration budget exceeded: {needed} cylinders requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("order must satisfy {0}")]
    OrderOutOfRange(&'static str),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid scale grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no scale produced a finite return time within the horizon")]
    NoReturnFound,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
