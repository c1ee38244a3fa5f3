use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::CliError;

pub fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(CliError::Io)?;
    serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))
        .map_err(CliError::Io)
}

/// Decodes `value` into `T`, treating a mismatch as a parse error.
pub fn decode<T: serde::de::DeserializeOwned>(
    value: serde_json::Value,
    what: &str,
) -> Result<T, CliError> {
    serde_json::from_value(value)
        .with_context(|| format!("cannot decode {what}"))
        .map_err(CliError::Io)
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let io = |e: anyhow::Error| CliError::Io(e.context(format!("cannot write {}", path.display())));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io(e.into()))?;
    serde_json::to_writer_pretty(&mut tmp, value).map_err(|e| io(e.into()))?;
    tmp.write_all(b"\n").map_err(|e| io(e.into()))?;
    tmp.persist(path).map_err(|e| io(e.error.into()))?;
    Ok(())
}
