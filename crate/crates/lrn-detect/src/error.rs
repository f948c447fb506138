use std::path::PathBuf;

pub type Result<T, E = DetectError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum DetectError {
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("invalid request: {0}")]
    Request(String),

    #[error(transparent)]
    Core(#[from] lrn_core::Error),

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

impl DetectError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DetectError::Io { path: path.into(), source }
    }
}
