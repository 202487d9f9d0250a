//! Optional TOML config file. Keys are the long flag names; a flag given on
//! the command line wins over the file.
//!
//! ```toml
//! angles = 2000
//! seed = 7
//! c = [1.0, -0.5]
//! p = "0.3+0.4i"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use toml::Value;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub angles: Option<usize>,
    pub oracle: Option<usize>,
    pub seed: Option<u64>,
    pub report: Option<PathBuf>,
    pub boundary: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub p: Option<Value>,
    pub beta: Option<f64>,
    pub size: Option<usize>,
    pub lambda: Option<Value>,
    pub x: Option<Value>,
    pub dims: Option<Value>,
    pub sizes: Option<Value>,
    pub c: Option<Value>,
    pub s0: Option<f64>,
    pub no_timestamp: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag-style text for a config value: numbers as written, arrays joined
/// with commas.
pub fn value_text(v: &Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::Array(items) => items.iter().map(value_text).collect::<Result<Vec<_>>>()?.join(","),
        other => bail!("unsupported config value {other}"),
    })
}

/// The flag if given, else the config entry.
pub fn pick_text(flag: Option<String>, cfg: &Option<Value>) -> Result<Option<String>> {
    match flag {
        Some(f) => Ok(Some(f)),
        None => cfg.as_ref().map(value_text).transpose(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_scalars() {
        let cfg: Config = toml::from_str("angles = 90\nc = [1.0, -2]\np = \"0.5\"\nno-timestamp = true\n").unwrap();
        assert_eq!(cfg.angles, Some(90));
        assert_eq!(value_text(cfg.c.as_ref().unwrap()).unwrap(), "1,-2");
        assert_eq!(pick_text(None, &cfg.p).unwrap().as_deref(), Some("0.5"));
        assert_eq!(pick_text(Some("0.1".into()), &cfg.p).unwrap().as_deref(), Some("0.1"));
        assert_eq!(cfg.no_timestamp, Some(true));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<Config>("colour = 1\n").is_err());
    }
}
