use std::path::PathBuf;

/// Failures of the experiment layer.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] anisowalk_core::Error),
    #[error("unknown experiment `{0}` (see `list-experiments`)")]
    UnknownExperiment(String),
    #[error("bad profile description `{text}`: {reason}")]
    Profile { text: String, reason: String },
    #[error("config: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl LabError {
    /// Whether the failure is the caller's fault (exit code 2).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            LabError::UnknownExperiment(_) | LabError::Profile { .. } | LabError::Config(_)
        )
    }
}

pub type LabResult<T> = Result<T, LabError>;
