//! `key=value` run configuration.

use std::path::{Path, PathBuf};

use quartic_core::class_group::DEFAULT_BOUND_CEILING;
use quartic_core::splitting::PrimeSet;

use crate::error::{CensusError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub max_disc: i64,
    pub max_regulator: f64,
    pub coeff_bound: i64,
    pub set_s: PrimeSet,
    pub class_bound_ceiling: f64,
    pub cache_dir: Option<PathBuf>,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            max_disc: 100_000,
            max_regulator: 6.0,
            coeff_bound: 8,
            set_s: PrimeSet::new(&[2, 3]).expect("{2, 3} is a valid prime set"),
            class_bound_ceiling: DEFAULT_BOUND_CEILING,
            cache_dir: None,
            threads: std::thread::available_parallelism().map(usize::from).unwrap_or(1),
        }
    }
}

/// Parses `p1,p2,...` into a prime set.
pub fn parse_prime_set(text: &str) -> Result<PrimeSet> {
    let primes = text
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CensusError::InvalidArgument(format!("set_S '{text}': {e}")))?;
    Ok(PrimeSet::new(&primes)?)
}

impl Config {
    /// Applies `key=value` lines; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CensusError::Parse { line: i + 1, message: format!("expected key=value, got '{line}'") })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                CensusError::InvalidArgument(message) => CensusError::Parse { line: i + 1, message },
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| CensusError::InvalidArgument(format!("bad value '{value}' for {key}")))
        }
        match key {
            "max_disc" => self.max_disc = num(key, value)?,
            "max_regulator" => self.max_regulator = num(key, value)?,
            "coeff_bound" => self.coeff_bound = num(key, value)?,
            "set_S" => {
                self.set_s = parse_prime_set(value).map_err(|e| CensusError::InvalidArgument(e.to_string()))?
            }
            "class_bound_ceiling" => self.class_bound_ceiling = num(key, value)?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "threads" => {
                self.threads = num(key, value)?;
                if self.threads == 0 {
                    return Err(CensusError::InvalidArgument("threads must be positive".into()));
                }
            }
            other => return Err(CensusError::InvalidArgument(format!("unknown key '{other}'"))),
        }
        Ok(())
    }
}
