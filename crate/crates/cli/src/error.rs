use std::fmt;

use starlike_core::Error;

/// Process exit codes. The numeric values are a stable contract.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or configuration.
    Usage(String),
    /// Unreadable or malformed input data.
    Input(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_PARSE,
            CliError::Core(e) => match e {
                Error::InvalidSpec(_)
                | Error::BadDominantInput(_)
                | Error::UnknownExample(_)
                | Error::InvalidGrid(_)
                | Error::InvalidMasses(_)
                | Error::NotNormalized { .. }
                | Error::NonzeroConstantTerm(_)
                | Error::NonunitConstantTerm(_) => EXIT_USAGE,
                Error::Parse(_) => EXIT_PARSE,
                Error::DivisionByZeroSeries { .. }
                | Error::ValuationMismatch { .. }
                | Error::PowerBranchError(_)
                | Error::DenominatorVanishes { .. } => EXIT_NUMERICAL,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Input(msg) => write!(f, "malformed input: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
