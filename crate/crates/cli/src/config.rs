//! Run configuration: defaults, `key = value` files, and validation.

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: String, line: usize },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(format!("unknown format `{s}`")),
        }
    }
}

/// Deliberate corruptions used to test that checks detect errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Replace the solved `a₃` by `−a₃`.
    A3Sign,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a3-sign" => Ok(Fault::A3Sign),
            _ => Err(format!("unknown fault `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub eps_order: u8,
    pub lambda_depth: usize,
    pub n_max: usize,
    pub k_max: usize,
    /// Restrict `n`-indexed checks to a single `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Restrict `k`-indexed checks to a single `k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub z_zero: bool,
    pub t_zero: bool,
    pub format: Format,
    pub checks: Vec<String>,
    pub seed: u64,
    #[serde(skip)]
    pub timings: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_fault: Option<Fault>,
    #[serde(skip)]
    n_max_explicit: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            eps_order: 6,
            lambda_depth: 8,
            n_max: 5,
            k_max: 4,
            n: None,
            k: None,
            z_zero: false,
            t_zero: false,
            format: Format::Text,
            checks: Vec::new(),
            seed: 20_240_601,
            timings: false,
            inject_fault: None,
            n_max_explicit: false,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue { key: key.into(), value: value.into() })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::BadValue { key: key.into(), value: value.into() }),
    }
}

impl RunConfig {
    /// Apply one `key = value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let k = key.replace('-', "_");
        match k.as_str() {
            "eps_order" | "n_eps" => self.eps_order = parse_value(key, value)?,
            "lambda_depth" | "depth" => self.lambda_depth = parse_value(key, value)?,
            "n_max" => self.set_n_max(parse_value(key, value)?),
            "k_max" => self.k_max = parse_value(key, value)?,
            "n" => self.n = Some(parse_value(key, value)?),
            "k" => self.k = Some(parse_value(key, value)?),
            "z_zero" => self.z_zero = parse_bool(key, value)?,
            "t_zero" => self.t_zero = parse_bool(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "format" => {
                self.format = value.parse().map_err(|_| ConfigError::BadValue {
                    key: key.into(),
                    value: value.into(),
                })?
            }
            "checks" | "check" => {
                self.checks = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
            }
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn set_n_max(&mut self, n: usize) {
        self.n_max = n;
        self.n_max_explicit = true;
    }

    /// Read a line-oriented `key = value` file; `#` starts a comment.
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: name.clone(), msg: e.to_string() })?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { path: name.clone(), line: i + 1 })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// `n_max` after clamping an implicit default to `D − 1`.
    pub fn effective_n_max(&self) -> usize {
        if self.n_max_explicit {
            self.n_max
        } else {
            self.n_max.min(self.lambda_depth.saturating_sub(1))
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.eps_order < 2 {
            return Err(ConfigError::Invalid(format!("eps order N = {} must be at least 2", self.eps_order)));
        }
        if self.lambda_depth < 1 {
            return Err(ConfigError::Invalid("lambda depth D must be at least 1".into()));
        }
        if self.n_max_explicit && self.n_max + 1 > self.lambda_depth {
            return Err(ConfigError::Invalid(format!(
                "n_max = {} exceeds D - 1 = {}",
                self.n_max,
                self.lambda_depth - 1
            )));
        }
        for c in &self.checks {
            if crate::registry::find(c).is_none() {
                return Err(ConfigError::UnknownCheck(c.clone()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# defaults\neps_order = 4\nlambda-depth = 6\nchecks = assoc, dls\nz_zero = yes\n").unwrap();
        let mut c = RunConfig::default();
        c.load_file(&path).unwrap();
        assert_eq!((c.eps_order, c.lambda_depth, c.z_zero), (4, 6, true));
        assert_eq!(c.checks, vec!["assoc", "dls"]);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(matches!(c.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(c.set("eps_order", "x"), Err(ConfigError::BadValue { .. })));
        c.set("eps_order", "1").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set_n_max(8);
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.checks = vec!["nonsense".into()];
        assert_eq!(c.validate(), Err(ConfigError::UnknownCheck("nonsense".into())));
    }

    #[test]
    fn implicit_n_max_follows_depth() {
        let mut c = RunConfig { lambda_depth: 1, ..RunConfig::default() };
        c.validate().unwrap();
        assert_eq!(c.effective_n_max(), 0);
        c.lambda_depth = 8;
        assert_eq!(c.effective_n_max(), 5);
    }
}
