use clark_core::ClarkError;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("computation failed: {0}")]
    Computation(#[from] ClarkError),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl CliError {
    /// 1 for bad input, 2 for a failed computation, 3 for a failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io { .. } => 1,
            CliError::Computation(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "schema",
            CliError::Io { .. } => "io",
            CliError::Computation(_) => "computation",
            CliError::Verification(_) => "verification",
        }
    }

    /// Machine-readable form for the error stream.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            error: &'a str,
            exit_code: i32,
            message: String,
        }
        serde_json::to_string(&Payload { error: self.kind(), exit_code: self.exit_code(), message: self.to_string() })
            .expect("plain payload serializes")
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
