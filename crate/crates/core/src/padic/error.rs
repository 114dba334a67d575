use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },
    #[error("division by a value indistinguishable from zero (known only modulo {prime}^{absolute_precision})")]
    DivisionByZero { prime: u64, absolute_precision: i64 },
    #[error("precision exhausted: {context}")]
    PrecisionExhausted { context: String },
    #[error("requested {requested} digits but only {available} are tracked")]
    TooManyDigits { requested: u32, available: u32 },
    #[error("argument outside the domain of {function}: {reason}")]
    OutOfDomain {
        function: &'static str,
        reason: String,
    },
    #[error("no square root in Q_{prime}: {reason}")]
    NoSquareRoot { prime: u64, reason: String },
    #[error("Hensel precondition failed: {0}")]
    HenselPrecondition(String),
    #[error("Newton iteration did not converge after {iterations} steps")]
    NotConverged { iterations: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = PadicError> = std::result::Result<T, E>;
