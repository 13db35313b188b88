use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] stalab_core::Error),
    #[error("{figure} at {axis} = {value}: {source}")]
    Point { figure: &'static str, axis: &'static str, value: f64, source: stalab_core::Error },
    #[error("invalid grid {0:?}: expected start:end:points with points >= 1")]
    Grid(String),
    #[error("unknown figure {0:?}")]
    UnknownFigure(String),
    #[error("{0}")]
    Config(String),
    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    ParseConfig(#[from] serde_json::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, Error>;
