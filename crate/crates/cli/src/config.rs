//! Key = value configuration files.
//!
//! Lookup order for the file: explicit `--config` path, then the
//! `SQSF_CONFIG` environment variable, then built-in defaults. Parsing is
//! strict: an unknown key or a bad value is a configuration error (exit 2),
//! unlike checkpoint logs which degrade gracefully.

use std::path::{Path, PathBuf};

use crate::output::Format;
use crate::{CliError, CliResult};

pub const CONFIG_ENV_VAR: &str = "SQSF_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub prime_table_limit: u64,
    pub segment_size: u64,
    pub worker_count: usize,
    pub enclosure_tolerance: f64,
    pub checkpoint_path: PathBuf,
    pub output_format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            prime_table_limit: 1_000_000,
            segment_size: 65_536,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            enclosure_tolerance: 1e-9,
            checkpoint_path: PathBuf::from("sqsf-checkpoint.log"),
            output_format: Format::Text,
        }
    }
}

impl Config {
    pub fn validate(&self) -> CliResult<()> {
        if self.prime_table_limit < 2 {
            return Err(CliError::Config("prime_table_limit must be at least 2".into()));
        }
        if self.segment_size == 0 {
            return Err(CliError::Config("segment_size must be positive".into()));
        }
        if self.worker_count == 0 {
            return Err(CliError::Config("worker_count must be positive".into()));
        }
        if self.enclosure_tolerance.is_nan() || self.enclosure_tolerance <= 0.0 {
            return Err(CliError::Config("enclosure_tolerance must be positive".into()));
        }
        Ok(())
    }

    /// One-line snapshot embedded into reports.
    pub fn snapshot(&self) -> String {
        format!(
            "prime_table_limit={} segment_size={} worker_count={} enclosure_tolerance={:e} checkpoint_path={} output_format={}",
            self.prime_table_limit,
            self.segment_size,
            self.worker_count,
            self.enclosure_tolerance,
            self.checkpoint_path.display(),
            self.output_format,
        )
    }
}

/// Parse a config file body. Blank lines and lines starting with `#` are
/// skipped; everything else must be `key = value` with a known key.
pub fn parse_config(text: &str) -> CliResult<Config> {
    let mut cfg = Config::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "config line {}: expected key = value, got {raw:?}",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            CliError::Config(format!("config line {}: bad {what} value {value:?}", lineno + 1))
        };
        match key {
            "prime_table_limit" => {
                cfg.prime_table_limit = value.parse().map_err(|_| bad("prime_table_limit"))?;
            }
            "segment_size" => {
                cfg.segment_size = value.parse().map_err(|_| bad("segment_size"))?;
            }
            "worker_count" => {
                cfg.worker_count = value.parse().map_err(|_| bad("worker_count"))?;
            }
            "enclosure_tolerance" => {
                cfg.enclosure_tolerance =
                    value.parse().map_err(|_| bad("enclosure_tolerance"))?;
            }
            "checkpoint_path" => {
                if value.is_empty() {
                    return Err(bad("checkpoint_path"));
                }
                cfg.checkpoint_path = PathBuf::from(value);
            }
            "output_format" => {
                cfg.output_format = value.parse().map_err(|e: String| CliError::Config(e))?;
            }
            other => {
                return Err(CliError::Config(format!(
                    "config line {}: unknown key {other:?}",
                    lineno + 1
                )));
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Resolve and load the configuration.
pub fn load(explicit: Option<&Path>) -> CliResult<Config> {
    let path = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from),
    };
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", p.display()))
            })?;
            parse_config(&text)
        }
        None => Ok(Config::default()),
    }
}
