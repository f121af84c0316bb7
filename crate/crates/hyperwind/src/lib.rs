//! Command-line front end for `hyperwind-core`: catalogue tables, simulations,
//! parameter scans and plotting scripts.

pub mod catalogue;
pub mod config;
pub mod error;
pub mod manifest;
pub mod plot;
pub mod scan;
pub mod simulate;
pub mod table;

pub use error::{CliError, ExitCode};

/// Resolves the worker count: `--threads`, then `HYPERWIND_THREADS`, then
/// rayon's default.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("HYPERWIND_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("HYPERWIND_THREADS must be a positive integer (got {s:?})"))),
        _ => Ok(None),
    }
}

/// Reads a JSON file; syntax errors are validation errors at `/`.
pub fn read_json(path: &std::path::Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::invalid("/", format!("{}: invalid JSON: {e}", path.display())))
}
