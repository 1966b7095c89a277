//! Run configuration: built-in defaults, then an optional TOML file named by
//! `STARLIKE_CONFIG`, then command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;
use starlike_core::grid::{DEFAULT_ANGLES, DEFAULT_MARGIN, DEFAULT_RADII};
use starlike_core::series::DEFAULT_ORDER;
use starlike_core::suites::DEFAULT_SEED;
use starlike_core::GridSpec;

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "STARLIKE_CONFIG";
/// Smallest order accepted by grid checks, suites and plot data.
pub const MIN_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Keys accepted in the config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub order: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub angles: Option<usize>,
    pub margin: Option<f64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn from_env() -> CliResult<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(Self::default()),
        }
    }
}

/// Flags that override the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub order: Option<usize>,
    pub radii: Option<Vec<f64>>,
    pub angles: Option<usize>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub legacy: bool,
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub order: usize,
    pub grid: GridSpec,
    /// `None` means "the command's natural format".
    pub format: Option<Format>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub legacy: bool,
}

impl CliConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> CliResult<Self> {
        let order = flags.order.or(file.order).unwrap_or(DEFAULT_ORDER);
        if order == 0 {
            return Err(CliError::Usage("--order must be at least 1".into()));
        }
        let grid = GridSpec::new(
            flags
                .radii
                .or(file.radii)
                .unwrap_or_else(|| DEFAULT_RADII.to_vec()),
            flags.angles.or(file.angles).unwrap_or(DEFAULT_ANGLES),
            file.margin.unwrap_or(DEFAULT_MARGIN),
        )?;
        Ok(Self {
            order,
            grid,
            format: flags.format.or(file.format),
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: flags.out,
            legacy: flags.legacy,
        })
    }

    /// Low orders are fine for printing coefficients but not for grid work.
    pub fn require_check_order(&self) -> CliResult<()> {
        if self.order < MIN_ORDER {
            return Err(CliError::Usage(format!(
                "--order {} is below the minimum of {MIN_ORDER} for this command",
                self.order
            )));
        }
        Ok(())
    }

    pub fn format_or(&self, natural: Format) -> Format {
        self.format.unwrap_or(natural)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = CliConfig::resolve(FileConfig::default(), Overrides::default()).unwrap();
        assert_eq!(cfg.order, 64);
        assert_eq!(cfg.grid, GridSpec::default());
        assert_eq!(cfg.seed, 20240001);
        assert_eq!(cfg.format, None);
    }

    #[test]
    fn flags_beat_file() {
        let file: FileConfig = toml::from_str("order = 10\nseed = 3\nformat = \"json\"").unwrap();
        let flags = Overrides {
            order: Some(12),
            ..Overrides::default()
        };
        let cfg = CliConfig::resolve(file, flags).unwrap();
        assert_eq!(cfg.order, 12);
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.format, Some(Format::Json));
    }

    #[test]
    fn rejects_small_order_and_bad_radii() {
        let zero = Overrides {
            order: Some(0),
            ..Overrides::default()
        };
        assert!(CliConfig::resolve(FileConfig::default(), zero).is_err());
        let small = Overrides {
            order: Some(3),
            ..Overrides::default()
        };
        let cfg = CliConfig::resolve(FileConfig::default(), small).unwrap();
        assert!(cfg.require_check_order().is_err());
        let radii = Overrides {
            radii: Some(vec![0.5, 1.0]),
            ..Overrides::default()
        };
        assert!(CliConfig::resolve(FileConfig::default(), radii).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("ordr = 4").is_err());
    }
}
