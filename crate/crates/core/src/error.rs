use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Malformed { path: PathBuf, line: usize, reason: String },

    /// More than half of an input file failed to parse; usually the wrong `--format`.
    #[error("{path}: {malformed} of {total} lines malformed, check the input format")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
    },

    #[error("timestamp {0} falls outside the study window")]
    OutOfWindow(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    #[error("vocabulary is empty after pruning (min_df={min_df}, max_df_ratio={max_df_ratio})")]
    EmptyVocabulary { min_df: usize, max_df_ratio: f64 },

    #[error("model/document mismatch: {0}")]
    Mismatch(String),

    #[error("missing stage input {0}")]
    MissingInput(PathBuf),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
