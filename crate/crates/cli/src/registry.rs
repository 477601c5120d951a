//! Thresholds measured by `bench`, keyed by dataset fingerprint.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError};

pub const ENV_VAR: &str = "INCKM_REGISTRY";
pub const DEFAULT_FILE: &str = "inckm-thresholds.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// Absent when the costs never crossed in the measured range.
    pub crossover_percent: Option<f64>,
    pub max_delta_percent: f64,
    pub basis: String,
}

pub fn resolve(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_FILE))
}

pub fn load(path: &Path) -> Result<BTreeMap<String, Entry>, CliError> {
    match std::fs::read_to_string(path) {
        Ok(text) => toml::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: malformed threshold registry: {}", path.display(), e.message()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(BTreeMap::new()),
        Err(e) => Err(io_error(path, e)),
    }
}

pub fn record(path: &Path, fingerprint: &str, entry: Entry) -> Result<(), CliError> {
    let mut all = load(path)?;
    all.insert(fingerprint.to_string(), entry);
    let text = toml::to_string(&all).map_err(|e| CliError::Data(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}
