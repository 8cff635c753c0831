use std::path::PathBuf;

use qswitch::Error as CoreError;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The scenario admits no stabilizing design (exit code 2).
    #[error("design failed for scenario '{scenario}': {source}")]
    Design {
        scenario: String,
        #[source]
        source: CoreError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// Process exit code: 2 for design failures, 3 for input and I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Design { .. } => 2,
            _ => 3,
        }
    }

    /// Wraps core errors raised while designing, classifying them by kind.
    pub(crate) fn design(scenario: &str, source: CoreError) -> Self {
        match source {
            CoreError::NotHurwitz { .. }
            | CoreError::NoCommonFixedPoint { .. }
            | CoreError::MultipleCommonFixedPoints { .. }
            | CoreError::FixedPointNotAState { .. }
            | CoreError::NotAFixedPoint { .. }
            | CoreError::NotInvariant { .. } => CliError::Design {
                scenario: scenario.to_string(),
                source,
            },
            other => CliError::Core(other),
        }
    }
}
