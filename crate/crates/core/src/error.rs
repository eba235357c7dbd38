use thiserror::Error;

/// Errors raised by the arithmetic core and the verification drivers.
///
/// Verification variants (`IntegralityViolation`, `NonzeroTail`,
/// `DegreeViolation`, `NonLinearInput`, `Mismatch`) can only fire if an
/// implementation bug breaks one of the theorems being checked.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("variable index {index} out of range 1..={max}")]
    InvalidVariable { index: usize, max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("integrality violated: {0}")]
    IntegralityViolation(String),
    #[error("nonzero tail: {0}")]
    NonzeroTail(String),
    #[error("degree bound violated: {0}")]
    DegreeViolation(String),
    #[error("input is not F_q-linear in each variable: {0}")]
    NonLinearInput(String),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// True for failures of a mathematical check (as opposed to bad input).
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::IntegralityViolation(_)
                | Error::NonzeroTail(_)
                | Error::DegreeViolation(_)
                | Error::NonLinearInput(_)
                | Error::Mismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
