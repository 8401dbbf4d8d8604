use thiserror::Error;

/// Errors raised by the library. Statistical "fail" outcomes (a learner
/// that fails, a boosting round without a good hypothesis) are values, not
/// errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} bits, got {found}")]
    Dimension { expected: u32, found: u32 },

    #[error("domain too large for this operation: d = {bits}, limit {limit}")]
    DomainTooLarge { bits: u32, limit: u32 },

    #[error("point {index} outside a domain of {bits} bits")]
    PointOutOfRange { index: u64, bits: u32 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("enumeration of {what} needs {required} items, budget is {budget}")]
    Infeasible {
        what: &'static str,
        required: f64,
        budget: f64,
    },

    #[error("family has no explicit support")]
    NoExplicitSupport,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("family kind `{0}` cannot be serialized")]
    NotSerializable(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in (0, 1)",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}
