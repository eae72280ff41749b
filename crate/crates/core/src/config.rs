//! Run configuration documents (TOML).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{DetectorThresholds, EvalSettings};
use crate::interaction::ClusterConfig;
use crate::optimizer::SearchConfig;
use crate::refactoring::CostParams;

pub const CONFIG_FORMAT: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub format: u32,
    pub search: SearchConfig,
    pub cost: CostParams,
    pub detectors: DetectorThresholds,
    pub clustering: ClusterConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: CONFIG_FORMAT,
            search: SearchConfig::default(),
            cost: CostParams::default(),
            detectors: DetectorThresholds::default(),
            clustering: ClusterConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != CONFIG_FORMAT {
            return Err(Error::Config(format!(
                "unsupported config format {}",
                self.format
            )));
        }
        self.search.validate()?;
        self.cost.validate()
    }

    pub fn eval_settings(&self) -> EvalSettings {
        EvalSettings {
            cost: self.cost.clone(),
            detectors: self.detectors.clone(),
        }
    }
}
