//! JSON file formats.
//!
//! All writers go through [`to_canonical_json`]: object keys sorted, compact
//! layout, shortest round-trip float formatting, trailing newline. Loading a
//! canonical file and saving it again reproduces the same bytes.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{validate_scenario, EditConfig, EditDecisionList, Scenario};

pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // `serde_json::Value` objects are BTreeMaps, so this sorts every key.
    let value = serde_json::to_value(value).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    let mut s = serde_json::to_string(&value).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_canonical<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = to_canonical_json(value)?;
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.to_path_buf(), source })
}

pub fn parse_scenario(text: &str) -> std::result::Result<Scenario, serde_json::Error> {
    serde_json::from_str(text)
}

/// Loads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let s: Scenario = read_json(path)?;
    let violations = validate_scenario(&s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario(violations));
    }
    Ok(s)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<()> {
    write_canonical(s, path)
}

pub fn load_config(path: &Path) -> Result<EditConfig> {
    let cfg: EditConfig = read_json(path)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn save_config(cfg: &EditConfig, path: &Path) -> Result<()> {
    write_canonical(cfg, path)
}

pub fn load_edl(path: &Path) -> Result<EditDecisionList> {
    let edl: EditDecisionList = read_json(path)?;
    edl.validate()?;
    Ok(edl)
}

pub fn save_edl(edl: &EditDecisionList, path: &Path) -> Result<()> {
    write_canonical(edl, path)
}

pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    read_json(path)
}
