use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const IO: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Validation { kind: &'static str, message: String },
    Numerical(String),
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Validation { .. } => exit::VALIDATION,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::VerifyFailed(_) => exit::VERIFY_FAILED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "IoError",
            CliError::Validation { kind, .. } => kind,
            CliError::Numerical(_) => "NumericalFailure",
            CliError::VerifyFailed(_) => "VerificationFailed",
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Validation {
            kind: "UsageError",
            message: message.into(),
        }
    }

    /// Single-line JSON for standard error.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Numerical(m) => f.write_str(m),
            CliError::Validation { message, .. } => f.write_str(message),
            CliError::VerifyFailed(n) => write!(f, "{n} verification suite(s) failed"),
        }
    }
}

impl From<gdap_core::Error> for CliError {
    fn from(e: gdap_core::Error) -> Self {
        match e {
            gdap_core::Error::NumericalFailure(m) => CliError::Numerical(m),
            other => CliError::Validation {
                kind: other.kind(),
                message: other.to_string(),
            },
        }
    }
}
