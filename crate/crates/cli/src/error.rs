use std::fmt;

use ranklab::constructions::ConstructionError;
use ranklab::latmod::LatticeError;
use ranklab::permgroup::GroupError;
use ranklab::verify::VerifyError;

pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

/// An error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    pub fn cap(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CAP,
            message: message.into(),
        }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_MISMATCH,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::CapExceeded { .. } => CliError::cap(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. }
            | GroupError::BudgetExceeded { .. }
            | GroupError::SearchExhausted { .. } => CliError::cap(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Construction(c) => c.into(),
            VerifyError::Budget(_) => CliError::cap(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Group(g) => g.into(),
            LatticeError::Construction(c) => c.into(),
            _ => CliError::domain(e.to_string()),
        }
    }
}
