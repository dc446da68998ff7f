use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad index,
    /// non-bijective permutation, malformed ranking, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A rule was configured in a way its family does not allow.
    #[error("invalid rule: {0}")]
    InvalidRule(String),

    /// A precondition of an operation was violated by a well-formed input.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The rule and the profile disagree on the number of agents or alternatives.
    #[error("shape mismatch: rule expects n={expected_n}, m={expected_m}; profile has n={n}, m={m}")]
    Mismatch {
        expected_n: usize,
        expected_m: usize,
        n: usize,
        m: usize,
    },

    /// An enumeration or search would exceed its configured budget.
    #[error("space too large: {what} needs {size} steps, budget is {budget}; use sampled mode")]
    SpaceTooLarge { what: String, size: u128, budget: u128 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
