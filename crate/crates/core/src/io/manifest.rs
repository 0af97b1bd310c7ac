use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::IoError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to reproduce a run: the resolved configuration, the
/// seeds, the code version and checksums of every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub started_unix: u64,
    pub wall_clock_seconds: f64,
    /// Exit status of the run; a nonzero value means partial artifacts.
    pub exit_code: i32,
    pub files: Vec<FileRecord>,
}

pub fn sha256_file(path: &Path) -> Result<(String, u64), IoError> {
    let bytes = fs::read(path).map_err(|e| IoError::file(path, e))?;
    Ok((hex::encode(Sha256::digest(&bytes)), bytes.len() as u64))
}

impl RunManifest {
    /// Checksums `files` (relative to `dir`) and writes `dir/manifest.json`.
    /// Call this after every artifact is on disk.
    pub fn finish(mut self, dir: &Path, files: &[String]) -> Result<Self, IoError> {
        self.files = files
            .iter()
            .map(|f| {
                let (sha256, bytes) = sha256_file(&dir.join(f))?;
                Ok(FileRecord {
                    path: f.clone(),
                    bytes,
                    sha256,
                })
            })
            .collect::<Result<_, IoError>>()?;
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self)?;
        fs::write(&path, text + "\n").map_err(|e| IoError::file(&path, e))?;
        Ok(self)
    }
}
