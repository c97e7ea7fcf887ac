use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("N must be a positive integer, got {0}")]
    InvalidIndex(u64),

    #[error("{what} = {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("the digit of 0 is infinite; the expansion terminates there")]
    ZeroPoint,

    #[error("coefficient a_{position} = {digit} is below N = {n}")]
    InadmissibleDigit { position: usize, digit: String, n: u64 },

    #[error("coefficient sequence is empty")]
    EmptyCoefficients,

    #[error("expansion has {available} terms (terminated: {terminated}), {requested} required")]
    ExpansionTooShort {
        available: usize,
        requested: usize,
        terminated: bool,
    },

    #[error("cannot parse fraction {0:?}; expected \"p/q\" with integers p >= 0, q > 0")]
    Parse(String),

    #[error("power iteration did not converge after {iterations} iterations (last L1 step {last_step:e})")]
    NotConverged { iterations: usize, last_step: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
