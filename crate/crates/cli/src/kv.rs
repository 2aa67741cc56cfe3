//! `key = value` configuration files. `#` starts a comment, keys may repeat
//! (list-valued settings such as scatterers).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default)]
pub struct KvFile {
    name: String,
    entries: BTreeMap<String, Vec<(usize, String)>>,
}

impl KvFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&path.display().to_string(), &text)
    }

    pub fn parse(name: &str, text: &str) -> CliResult<Self> {
        let mut entries: BTreeMap<String, Vec<(usize, String)>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("{name}:{}: expected `key = value`, got `{line}`", i + 1)));
            };
            let key = key.trim();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(CliError::Config(format!("{name}:{}: invalid key `{key}`", i + 1)));
            }
            entries.entry(key.to_string()).or_default().push((i + 1, value.trim().to_string()));
        }
        Ok(Self { name: name.to_string(), entries })
    }

    /// Fails on keys outside `known`, naming the line of the first one.
    pub fn reject_unknown(&self, known: &[&str]) -> CliResult<()> {
        for (key, values) in &self.entries {
            if !known.contains(&key.as_str()) {
                return Err(CliError::Config(format!("{}:{}: unknown key `{key}`", self.name, values[0].0)));
            }
        }
        Ok(())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        let Some(values) = self.entries.get(key) else {
            return Ok(None);
        };
        if values.len() > 1 {
            return Err(CliError::Config(format!("{}:{}: `{key}` given more than once", self.name, values[1].0)));
        }
        let (line, v) = &values[0];
        self.convert(*line, key, v).map(Some)
    }

    pub fn require<T: FromStr>(&self, key: &str) -> CliResult<T> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("{}: missing required key `{key}`", self.name)))
    }

    /// Every occurrence of `key`, each split at commas.
    pub fn lists<T: FromStr>(&self, key: &str) -> CliResult<Vec<Vec<T>>> {
        let Some(values) = self.entries.get(key) else {
            return Ok(Vec::new());
        };
        values
            .iter()
            .map(|(line, v)| v.split(',').map(|item| self.convert(*line, key, item.trim())).collect())
            .collect()
    }

    fn convert<T: FromStr>(&self, line: usize, key: &str, value: &str) -> CliResult<T> {
        value
            .parse()
            .map_err(|_| CliError::Config(format!("{}:{line}: cannot parse `{value}` for `{key}`", self.name)))
    }
}
