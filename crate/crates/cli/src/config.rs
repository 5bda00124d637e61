//! Plain-text `key = value` configuration: `cache_dir` and `prec`.
//!
//! Precedence is command-line flag, then the environment variable for the
//! cache directory, then the file, then built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use k3mahler::numeric::DEFAULT_PREC;
use k3mahler::pointcount::{ApCache, CACHE_ENV};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub prec: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| ConfigError::Parse { line: i + 1, reason };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value".into()))?;
            let value = value.trim();
            match key.trim() {
                "cache_dir" => c.cache_dir = Some(PathBuf::from(value)),
                "prec" => c.prec = Some(value.parse().map_err(|_| bad(format!("prec {value:?} is not an integer")))?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text =
            fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Config::parse(&text)
    }

    pub fn prec(&self, flag: Option<usize>) -> usize {
        flag.or(self.prec).unwrap_or(DEFAULT_PREC)
    }

    /// Flag, then $K3MAHLER_CACHE_DIR, then the file entry, then the default location.
    pub fn cache(&self, flag: Option<&Path>) -> Option<ApCache> {
        if let Some(d) = flag {
            return Some(ApCache::new(d));
        }
        if std::env::var_os(CACHE_ENV).is_some_and(|d| !d.is_empty()) {
            return ApCache::from_env();
        }
        match &self.cache_dir {
            Some(d) => Some(ApCache::new(d)),
            None => ApCache::from_env(),
        }
    }
}
