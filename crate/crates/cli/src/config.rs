//! The JSON run configuration: every simulation setting plus where to write
//! results.

use std::fs;
use std::path::{Path, PathBuf};

use effcomm::simloop::SimConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub sim: SimConfig,
    pub output: OutputPaths,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    /// Directory for the report and series files; `--out` overrides it.
    pub dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let fail = |message: String| CliError::Config {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
        Self::parse(&text).map_err(fail)
    }

    /// Parses and checks a config document. Keys the schema does not know
    /// are rejected so that typos do not silently fall back to defaults.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let reference = serde_json::to_value(RunConfig::default()).expect("serializable");
        let mut unknown = Vec::new();
        unknown_keys(&value, &reference, "", &mut unknown);
        if !unknown.is_empty() {
            return Err(format!("unknown field(s): {}", unknown.join(", ")));
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| e.to_string())?;
        cfg.sim.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

fn unknown_keys(value: &Value, reference: &Value, prefix: &str, out: &mut Vec<String>) {
    let (Value::Object(given), Value::Object(known)) = (value, reference) else {
        return;
    };
    for (key, v) in given {
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match known.get(key) {
            Some(r) => unknown_keys(v, r, &path, out),
            None => out.push(path),
        }
    }
}
