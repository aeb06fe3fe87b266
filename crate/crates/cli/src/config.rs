use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Records,
}

/// Optional overrides of the built-in check tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Largest accepted |identity residual|, on top of the certified tolerance.
    pub identity: Option<f64>,
    /// Largest accepted Mellin bracket width.
    pub mellin_width: Option<f64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
    pub block_size: Option<usize>,
    #[serde(default)]
    pub tolerance: Tolerances,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let c: FileConfig = toml::from_str(&text).with_context(|| format!("config {}", path.display()))?;
        if c.jobs == Some(0) {
            bail!("config: jobs must be at least 1");
        }
        if c.block_size == Some(0) {
            bail!("config: block_size must be at least 1");
        }
        Ok(c)
    }
}

/// Settings shared by every subcommand, after merging flags over the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
    pub block_size: Option<usize>,
    pub tolerance: Tolerances,
    /// Input files named on the command line.
    pub inputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn merge(
        file: FileConfig,
        cache_dir: Option<PathBuf>,
        format: Option<Format>,
        jobs: Option<usize>,
        inputs: Vec<PathBuf>,
    ) -> Self {
        Self {
            cache_dir: cache_dir.or(file.cache_dir),
            format: format.or(file.format).unwrap_or_default(),
            jobs: jobs.or(file.jobs),
            block_size: file.block_size,
            tolerance: file.tolerance,
            inputs,
        }
    }

    /// Input files must exist and the cache directory, if given, must be a directory.
    pub fn validate(&self, create_cache: bool) -> Result<()> {
        for p in &self.inputs {
            if !p.is_file() {
                bail!("no such file: {}", p.display());
            }
        }
        if let Some(d) = &self.cache_dir {
            if create_cache && !d.exists() {
                std::fs::create_dir_all(d).with_context(|| format!("creating cache dir {}", d.display()))?;
            }
            if d.exists() && !d.is_dir() {
                bail!("cache dir {} is not a directory", d.display());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("jobz = 3").is_err());
        assert!(toml::from_str::<FileConfig>("[tolerance]\nidentiy = 1e-9").is_err());
        let c: FileConfig = toml::from_str("format = \"records\"\njobs = 2\n[tolerance]\nidentity = 1e-9").unwrap();
        assert_eq!(c.format, Some(Format::Records));
        assert_eq!(c.tolerance.identity, Some(1e-9));
    }

    #[test]
    fn flags_take_precedence() {
        let file = FileConfig { jobs: Some(2), format: Some(Format::Records), ..Default::default() };
        let r = RunConfig::merge(file, None, Some(Format::Human), Some(4), vec![]);
        assert_eq!((r.jobs, r.format), (Some(4), Format::Human));
    }
}
