//! Run configuration: a `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("bad value for {key}: {message}")]
    Value { key: String, message: String },
    #[error("unknown key {0}")]
    UnknownKey(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Emit {
    pub json: bool,
    pub tsv: bool,
    pub svg: bool,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut e = Emit::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "json" => e.json = true,
                "tsv" => e.tsv = true,
                "svg" => e.svg = true,
                other => return Err(format!("unknown format {other:?}")),
            }
        }
        Ok(e)
    }
}

/// `A..B` (inclusive) or a single `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let s = s.trim();
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub n: RangeInclusive<u32>,
    pub max_n: u32,
    pub max_s: u32,
    pub max_t: u32,
    pub checkpoint: Option<PathBuf>,
    pub tables: Option<PathBuf>,
    pub out: PathBuf,
    pub emit: Emit,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 3..=12,
            max_n: 12,
            max_s: 8,
            max_t: 48,
            checkpoint: None,
            tables: None,
            out: PathBuf::from("out"),
            emit: Emit { json: true, tsv: false, svg: false },
        }
    }
}

pub const KEYS: [&str; 8] = ["n", "max_n", "max_s", "max_t", "checkpoint", "tables", "out", "emit"];

impl RunConfig {
    /// Sets one key. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError::Value { key: key.into(), message };
        let num = |v: &str| v.trim().parse::<u32>().map_err(|e| bad(e.to_string()));
        match key.replace('-', "_").as_str() {
            "n" => self.n = parse_range(value).map_err(bad)?,
            "max_n" => self.max_n = num(value)?,
            "max_s" => self.max_s = num(value)?,
            "max_t" => self.max_t = num(value)?,
            "checkpoint" => self.checkpoint = Some(PathBuf::from(value.trim())),
            "tables" => self.tables = Some(PathBuf::from(value.trim())),
            "out" => self.out = PathBuf::from(value.trim()),
            "emit" => self.emit = value.parse().map_err(bad)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    pub fn parse_file_text(text: &str, path: &str) -> Result<BTreeMap<String, String>, ConfigError> {
        let mut out = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.into(),
                line: i + 1,
                message: "expected key = value".into(),
            })?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    /// Defaults, then the file at `path` if any, then `overrides`.
    pub fn load(path: Option<&Path>, overrides: &[(&str, String)]) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p).map_err(|e| ConfigError::Syntax {
                path: p.display().to_string(),
                line: 0,
                message: e.to_string(),
            })?;
            for (k, v) in Self::parse_file_text(&text, &p.display().to_string())? {
                cfg.set(&k, &v)?;
            }
        }
        for (k, v) in overrides {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_s == 0 || self.max_t == 0 {
            return Err(ConfigError::Value {
                key: "max_s/max_t".into(),
                message: "oracle bounds must be positive".into(),
            });
        }
        for p in [&self.checkpoint, &self.tables].into_iter().flatten() {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                if !dir.exists() {
                    return Err(ConfigError::Value {
                        key: p.display().to_string(),
                        message: "parent directory does not exist".into(),
                    });
                }
            }
        }
        Ok(())
    }
}
