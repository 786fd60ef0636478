use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const DEFAULT_CONFIG: &str = "cliffhopf.toml";
pub const TOL_ENV: &str = "CLIFFHOPF_TOL";

/// Optional defaults read from `cliffhopf.toml`; command-line flags win.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sig: Option<String>,
    pub tol: Option<f64>,
    pub kappa: Option<f64>,
    pub deform: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

impl FileConfig {
    /// An explicit path must exist; the default path is optional.
    pub fn load(explicit: Option<&Path>) -> Result<FileConfig, String> {
        let (path, required) = match explicit {
            Some(p) => (p.to_path_buf(), true),
            None => (PathBuf::from(DEFAULT_CONFIG), false),
        };
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) if !required => return Ok(FileConfig::default()),
            Err(e) => return Err(format!("{}: {e}", path.display())),
        };
        toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e.message()))
    }
}

/// Tolerance from flag, then environment, then config file.
pub fn resolve_tol(flag: Option<f64>, file: &FileConfig) -> Result<Option<f64>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| format!("{TOL_ENV}: cannot parse '{v}' as a number")),
        Err(_) => Ok(file.tol),
    }
}
