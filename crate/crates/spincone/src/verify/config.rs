//! Run configuration: JSON file with top-level
//! `{engine, suites, geometries, seed, sample_count}`; CLI flags override
//! file values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensorcalc::{DiffEngine, Scheme};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct EngineConfig {
    pub scheme: Scheme,
    pub step: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            scheme: Scheme::Richardson,
            step: 1e-2,
        }
    }
}

impl EngineConfig {
    pub fn engine(&self) -> DiffEngine {
        DiffEngine {
            scheme: self.scheme,
            step: self.step,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct RunConfig {
    /// Seeds every random choice: sample points, spinors, perturbations.
    pub seed: u64,
    /// Override of the per-suite default sample counts.
    pub sample_count: Option<usize>,
    pub engine: EngineConfig,
    /// Suites to run; `None` means all registered suites.
    pub suites: Option<Vec<String>>,
    /// Geometry filter; `None` means each suite's default set.
    pub geometries: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            sample_count: None,
            engine: EngineConfig::default(),
            suites: None,
            geometries: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.engine.step > 0.0) {
            return Err(Error::Config(format!(
                "engine step {} must be positive",
                self.engine.step
            )));
        }
        if let Some(count) = self.sample_count {
            if count == 0 {
                return Err(Error::Config("sample_count must be >= 1".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_engine_is_richardson() {
        let config = RunConfig::default();
        assert_eq!(config.engine.scheme, Scheme::Richardson);
        assert_eq!(config.engine.step, 1e-2);
        assert_eq!(config.seed, 42);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let config: RunConfig = serde_json::from_str(r#"{"seed": 7}"#).unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.engine, EngineConfig::default());
        assert!(config.suites.is_none());
    }

    #[test]
    fn zero_samples_rejected() {
        let config: RunConfig = serde_json::from_str(r#"{"sample_count": 0}"#).unwrap();
        assert!(config.validate().is_err());
    }
}
