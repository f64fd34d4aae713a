//! `key = value` configuration files. Lists are comma separated; `#` starts
//! a comment. Command-line flags take precedence over file values.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "family",
    "level",
    "levels",
    "mesh",
    "model",
    "p",
    "lambda",
    "dt",
    "T",
    "out",
    "format",
    "seed",
    "norm",
    "solver",
    "picard_tol",
    "picard_max",
    "linear_tol",
    "serial",
];

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                bail!("line {}: unknown key '{key}'", n + 1);
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key '{key}': {e}")))
            .transpose()
    }

    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.values.get(key).map(|v| parse_list(v)).transpose()
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| anyhow!("'{t}': {e}")))
        .collect()
}

/// Flag value if given, else file value.
pub fn pick<T: FromStr>(flag: Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

pub fn pick_list<T: FromStr>(flag: Option<&str>, file: &FileConfig, key: &str) -> Result<Option<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => parse_list(v).map(Some),
        None => file.get_list(key),
    }
}
