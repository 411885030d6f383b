//! `key<TAB>value` config files. Keys are the long flag names; a flag given on
//! the command line always wins over the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::UsageError;

/// Directory holding `lexicon.tsv` when `--lexicon` is not given.
pub const LEXICON_DIR_ENV: &str = "DISCOCAT_LEXICON_DIR";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Default)]
pub struct ConfigFile {
    path: Option<PathBuf>,
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('\t').ok_or_else(|| {
                UsageError(format!("{}:{}: expected key<TAB>value", path.display(), i + 1))
            })?;
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self {
            path: Some(path.to_path_buf()),
            values,
        })
    }

    /// Parsed value for `key`, if the file sets it.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                let origin = self
                    .path
                    .as_deref()
                    .map_or_else(String::new, |p| format!("{}: ", p.display()));
                UsageError(format!("{origin}invalid value `{raw}` for `{key}`: {e}"))
            }),
        }
    }

    /// `flag`, else the config value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, UsageError>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?
            .ok_or_else(|| UsageError(format!("missing --{key} (flag or config entry)")))
    }

    /// An input file that must exist.
    pub fn input(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, UsageError> {
        let path: PathBuf = self.require(flag, key)?;
        existing(path)
    }

    /// The lexicon file: flag, config, then `$DISCOCAT_LEXICON_DIR/lexicon.tsv`.
    pub fn lexicon(&self, flag: Option<PathBuf>) -> Result<PathBuf, UsageError> {
        if let Some(p) = self.pick(flag, "lexicon")? {
            return existing(p);
        }
        match std::env::var_os(LEXICON_DIR_ENV) {
            Some(dir) => existing(PathBuf::from(dir).join("lexicon.tsv")),
            None => Err(UsageError(format!(
                "missing --lexicon (flag, config entry or {LEXICON_DIR_ENV})"
            ))),
        }
    }
}

fn existing(path: PathBuf) -> Result<PathBuf, UsageError> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(UsageError(format!("no such file: {}", path.display())))
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub workers: Option<usize>,
    /// No current pipeline step draws random numbers; kept so scripted
    /// invocations stay stable if one does.
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(
        file: &ConfigFile,
        workers: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self, UsageError> {
        let workers = file.pick(workers, "workers")?;
        if workers == Some(0) {
            return Err(UsageError("--workers must be at least 1".into()));
        }
        Ok(Self {
            workers,
            seed: file.pick(seed, "seed")?.unwrap_or(DEFAULT_SEED),
        })
    }
}
