use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SaliencyError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SaliencyError {
    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },
    #[error("crop {x},{y} {w}x{h} does not fit a {width}x{height} map")]
    CropOutOfRange {
        x: u32,
        y: u32,
        w: u32,
        h: u32,
        width: u32,
        height: u32,
    },
    #[error("saliency map is empty")]
    EmptyMap,
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
