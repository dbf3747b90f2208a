use std::fmt;

use qzeta_core::Error;

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

/// A failed invocation, carrying the message shown on stderr.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Input(String),
    Convergence(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Convergence(_) => EXIT_CONVERGENCE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Convergence(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_convergence() {
            Failure::Convergence(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(format!("csv output: {e}"))
    }
}

pub fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}
