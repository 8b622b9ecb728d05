use thiserror::Error;

/// Errors raised by precondition checks across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient orders differ: {left} vs {right}")]
    MismatchedOrder { left: usize, right: usize },
    #[error("invalid Moran structure at level {level}: {reason}")]
    InvalidStructure { level: usize, reason: String },
    #[error("interval budget exceeded: {required} intervals requested, budget {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),
    #[error("value {value} outside admissible range: {bound}")]
    OutOfRange { value: f64, bound: String },
    #[error("measure condition m(X_{{{level},N}}) > r not met up to N = {best_n} (lower confidence bound {best_lower})")]
    MeasureCondition {
        level: usize,
        best_n: u64,
        best_lower: f64,
    },
    #[error("sampling budget of {budget} exhausted at level {level}")]
    SamplingExhausted { level: usize, budget: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
