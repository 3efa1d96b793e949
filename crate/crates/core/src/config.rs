//! Runtime limits and output settings.
//!
//! Every limit has a documented default and can be overridden through an
//! environment variable (see [`Config::from_env`]).

use std::path::PathBuf;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_TABLE: usize = 100_000;
pub const DEFAULT_MAX_FRACTAL: usize = 2_000;
pub const DEFAULT_MAX_TRACE_NODES: usize = 1_000_000;
pub const DEFAULT_SCAN_LIMIT: usize = 400;
/// Backtracking enumeration is exponential; it is a test oracle only.
pub const ENUMERATION_MAX: usize = 40;

pub const ENV_MAX_TABLE: &str = "PARTFRAC_MAX_TABLE";
pub const ENV_MAX_FRACTAL: &str = "PARTFRAC_MAX_FRACTAL";
pub const ENV_MAX_TRACE_NODES: &str = "PARTFRAC_MAX_TRACE_NODES";
pub const ENV_SCAN_LIMIT: &str = "PARTFRAC_SCAN_LIMIT";
pub const ENV_CATALOG: &str = "PARTFRAC_CATALOG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `limit` accepted by the table builders.
    pub max_table: usize,
    /// Largest n accepted by the fractal evaluator.
    pub max_fractal: usize,
    /// Node budget for materialized expansion trees.
    pub max_trace_nodes: usize,
    /// Largest n a recurrence scan may reach.
    pub scan_limit: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table: DEFAULT_MAX_TABLE,
            max_fractal: DEFAULT_MAX_FRACTAL,
            max_trace_nodes: DEFAULT_MAX_TRACE_NODES,
            scan_limit: DEFAULT_SCAN_LIMIT,
        }
    }
}

impl Limits {
    pub fn check(what: &'static str, requested: usize, max: usize) -> Result<()> {
        if requested > max {
            return Err(Error::ResourceLimit {
                what,
                requested,
                max,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Config {
    pub limits: Limits,
    pub output: OutputMode,
    pub catalog_path: Option<PathBuf>,
}

impl Config {
    /// Defaults overridden by `PARTFRAC_*` environment variables.
    pub fn from_env() -> Result<Self> {
        Self::from_lookup(|key| std::env::var(key).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let mut config = Config::default();
        let read = |key: &str, slot: &mut usize| -> Result<()> {
            if let Some(raw) = lookup(key) {
                let value: usize = raw.trim().parse().map_err(|_| {
                    Error::Parse(format!("{key}={raw:?} is not a positive integer"))
                })?;
                if value == 0 {
                    return Err(Error::Parse(format!("{key} must be positive")));
                }
                *slot = value;
            }
            Ok(())
        };
        read(ENV_MAX_TABLE, &mut config.limits.max_table)?;
        read(ENV_MAX_FRACTAL, &mut config.limits.max_fractal)?;
        read(ENV_MAX_TRACE_NODES, &mut config.limits.max_trace_nodes)?;
        read(ENV_SCAN_LIMIT, &mut config.limits.scan_limit)?;
        config.catalog_path = lookup(ENV_CATALOG).map(PathBuf::from);
        Ok(config)
    }
}
