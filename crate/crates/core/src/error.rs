use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the requested quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A non-integer power was requested on the principal branch cut.
    #[error("branch error: {0}")]
    Branch(String),
    #[error("pole error: {0}")]
    Pole(String),
    /// A character table or character description failed validation.
    #[error("validation error: {0}")]
    Validation(String),
    /// A series did not reach its tail bound within the term budget.
    #[error("convergence error: {what} did not meet its tail bound within {max_terms} terms")]
    Convergence {
        what: &'static str,
        max_terms: usize,
    },
    #[error("quadrature error: {0}")]
    Quadrature(String),
}

impl Error {
    /// True for failures caused by exhausted iteration budgets rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Quadrature(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
