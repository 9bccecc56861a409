use thiserror::Error;

/// Errors surfaced by the command line, each with a stable code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] facetnav_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Server(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        use facetnav_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::UnknownValue(_) => "unknown_value",
                E::DuplicateSelection(_) => "duplicate_selection",
                E::Validation { .. } => "invalid_input",
                E::SurfaceMismatch { .. } => "surface_mismatch",
                E::Io { .. } => "io",
                E::Index(_) => "bad_index",
                E::Config(_) => "config",
                E::UnknownSession(_) | E::UnknownDocument(_) | E::BadSentenceRef { .. } => "not_found",
            },
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Server(_) => "server",
        }
    }

    /// Selection problems exit with 2, like usage errors; the rest with 1.
    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "unknown_value" | "duplicate_selection" | "config" => 2,
            _ => 1,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({"error": {"code": self.code(), "message": self.to_string()}}).to_string()
    }
}
