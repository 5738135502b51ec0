use std::fmt;
use std::process::ExitCode;

use pilotwave_core::Error as CoreError;

/// Process exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    CheckFailed = 1,
    Parse = 2,
    Invariant = 3,
    Degenerate = 4,
    Inconclusive = 5,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e.code())
    }
}

/// An error carrying the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        CliError {
            exit,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(Exit::Parse, message)
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self::new(Exit::Invariant, message)
    }

    pub fn degenerate(message: impl Into<String>) -> Self {
        Self::new(Exit::Degenerate, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::parse(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let exit = match e {
            CoreError::InvalidParameter { .. } | CoreError::Dimension { .. } | CoreError::Unsupported(_) => {
                Exit::Parse
            }
            CoreError::Inconclusive { .. } => Exit::Inconclusive,
            CoreError::Node { .. }
            | CoreError::NumericalBlowup { .. }
            | CoreError::DegeneratePacket
            | CoreError::DegenerateCondition(_)
            | CoreError::PathologicalEnvelope { .. } => Exit::Degenerate,
        };
        CliError::new(exit, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
