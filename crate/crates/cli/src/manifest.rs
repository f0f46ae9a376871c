use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::OUT_DIR_ENV;

/// Output directory: the flag, then the environment, then `.`.
pub fn out_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
    }
}

/// Run record with every parameter needed to reproduce the outputs. Keys
/// are sorted and no clock or host data is included, so identical runs give
/// identical manifests.
pub fn manifest(command: &str, params: Value, outputs: &[PathBuf]) -> Value {
    json!({
        "tool": "bfly",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    })
}

/// `<path>.manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    fs::write(path, text)
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)
}
