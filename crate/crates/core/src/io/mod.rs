//! Configuration files, CSV tables, binary checkpoints, plot scripts and run
//! manifests.

mod checkpoint;
mod config;
mod manifest;
mod tables;

pub use checkpoint::{
    read_checkpoint, write_checkpoint, Checkpoint, CheckpointHeader, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};
pub use config::{
    derive_seeds, load_config, AbsorbingConfig, AttractorConfig, ConfigFile, ConfigPreset, ConvergenceConfig,
    ErgodicConfig, ExperimentsConfig, FieldSpec, LoadedConfig, ModeSpec, PullbackConfig, SmoothingConfig,
};
pub use manifest::{sha256_file, FileRecord, RunManifest};
pub use tables::{emit_plot_script, write_csv, write_path_csv, write_series_csv, PlotSpec, SERIES_HEADER};

use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invalid config at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: bad magic, not a checkpoint file")]
    BadMagic { path: PathBuf },
    #[error("{path}: checkpoint version mismatch (file has {found}, this build reads {expected})")]
    VersionMismatch { path: PathBuf, found: u32, expected: u32 },
    #[error("{path}: truncated checkpoint ({found} bytes, expected {expected})")]
    Truncated { path: PathBuf, expected: usize, found: usize },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
