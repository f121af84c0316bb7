use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Written as `manifest.json` next to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seed_family: Option<String>,
    pub parameters: Value,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seed_family: Option<String>, parameters: Value) -> Self {
        Self {
            command: command.into(),
            config,
            seed_family,
            parameters,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_clock_seconds: 0.0,
            exit_code: 0,
        }
    }

    pub fn finish(mut self, out: &Path, started: Instant, exit_code: i32) -> Result<(), CliError> {
        self.wall_clock_seconds = started.elapsed().as_secs_f64();
        self.exit_code = exit_code;
        let path = out.join("manifest.json");
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        fs::write(&path, text).map_err(|e| CliError::io(path, e))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
