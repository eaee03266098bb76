use std::fmt;

/// How a run ended, mapped to the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    /// A check ran to completion and did not hold.
    Failed,
    /// Some limit, quadrature or fit did not converge; a partial report was written.
    NonConverged,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Passed => 0,
            Outcome::Failed => 1,
            Outcome::NonConverged => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Passed => "ok",
            Outcome::Failed => "failed",
            Outcome::NonConverged => "nonconverged",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// The configuration or the flags are invalid (exit 2).
    Schema(String),
    /// Anything else that stops a run (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "invalid configuration: {m}"),
            CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

/// Library errors raised while setting a run up come from the configuration.
pub fn setup(e: gevrey::Error) -> CliError {
    CliError::Schema(e.to_string())
}

pub type CliResult<T> = Result<T, CliError>;
