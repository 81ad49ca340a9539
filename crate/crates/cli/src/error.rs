use std::fmt;

/// Process exit statuses; each outcome category maps to exactly one code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged = 0,
    ConfigError = 1,
    MaxIters = 2,
    NumericError = 3,
    TableMismatch = 4,
    PropertyViolation = 5,
    SpectralNotConverged = 6,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        CliError {
            status,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Status::ConfigError, message)
    }

    /// Wraps a library error raised while interpreting `field`.
    pub fn from_core(field: &str, e: splitsolve::Error) -> Self {
        let status = match e {
            splitsolve::Error::SpectralNotConverged { .. } => Status::SpectralNotConverged,
            _ => Status::ConfigError,
        };
        Self::new(status, format!("{field}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
