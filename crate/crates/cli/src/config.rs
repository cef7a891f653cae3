//! Flat `key=value` scenario configs; flags win over config entries.

use anyhow::{bail, Context, Result};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                match line.split_once('=') {
                    Some((k, v)) => {
                        values.insert(k.trim().to_string(), v.trim().to_string());
                    }
                    None => bail!("config line {}: expected key=value", lineno + 1),
                }
            }
        }
        Ok(Config { values })
    }

    /// Flag value if set, else config value, else the default.
    pub fn resolve<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v.clone());
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| anyhow::anyhow!("config key {key}={raw}: {e}")),
            None => Ok(default),
        }
    }
}

/// Inclusive seed range `a..b`, or a single seed `a`.
#[derive(Debug, Clone)]
pub struct SeedRange {
    pub lo: u64,
    pub hi: u64,
}

impl SeedRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| e.to_string());
        if let Some((a, b)) = s.split_once("..") {
            let (lo, hi) = (parse(a)?, parse(b)?);
            if lo > hi {
                return Err(format!("empty seed range {s}"));
            }
            Ok(SeedRange { lo, hi })
        } else {
            let v = parse(s)?;
            Ok(SeedRange { lo: v, hi: v })
        }
    }
}

impl std::fmt::Display for SeedRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}
