use std::fmt;

/// Exit status contract: 2 schema or unknown input, 3 budget, 4 invariant breach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Schema = 2,
    Budget = 3,
    Invariant = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Schema,
            message: message.into(),
        }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Invariant,
            message: message.into(),
        }
    }

    pub fn code(&self) -> u8 {
        self.kind as u8
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<conelab_core::Error> for CliError {
    fn from(e: conelab_core::Error) -> Self {
        use conelab_core::Error as E;
        let kind = match &e {
            E::BudgetExceeded { .. } | E::PhiInverse { .. } => ExitKind::Budget,
            E::Invariant(_) => ExitKind::Invariant,
            _ => ExitKind::Schema,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::schema(format!("scenario schema: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
