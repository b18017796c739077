//! Error type shared across the simulator, with stable codes and exit
//! statuses for the command line.

use std::path::PathBuf;

/// Everything that can go wrong outside the core pipeline itself.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("scene validation failed: {0}")]
    Validation(String),

    #[error("replay failed: {0}")]
    Pipeline(String),

    #[error("{0}")]
    Range(String),
}

impl SimError {
    /// Short machine-grepable code, printed as `error[E_CODE]: ...`.
    pub fn code(&self) -> &'static str {
        match self {
            SimError::Read { .. } | SimError::Write { .. } => "E_IO",
            SimError::Parse { .. } | SimError::Format { .. } => "E_PARSE",
            SimError::Config(_) => "E_CONFIG",
            SimError::Validation(_) => "E_VALIDATE",
            SimError::Pipeline(_) => "E_PIPELINE",
            SimError::Range(_) => "E_RANGE",
        }
    }

    /// Process exit status for this error class. 2 is reserved for
    /// command-line usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Read { .. }
            | SimError::Write { .. }
            | SimError::Parse { .. }
            | SimError::Format { .. }
            | SimError::Config(_)
            | SimError::Range(_) => 3,
            SimError::Validation(_) => 4,
            SimError::Pipeline(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;

pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|source| SimError::Read { path: path.to_path_buf(), source })
}

pub fn write_string(path: &std::path::Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|source| SimError::Write { path: path.to_path_buf(), source })
}
