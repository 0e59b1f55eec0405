use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid opinion: {0}")]
    InvalidOpinion(String),

    #[error("dimension mismatch: expected {expected} classes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("sweep definition `{spec}`: {message}")]
    Sweep { spec: String, message: String },

    #[error("unknown scheme `{0}` (expected DASH_DF, SMM_DF, DF_ONLY or BASE)")]
    UnknownScheme(String),

    #[error("output directory {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
