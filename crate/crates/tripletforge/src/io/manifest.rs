use std::path::Path;

use serde::{Deserialize, Serialize};

use super::cache::CacheEvent;
use super::config::RunConfig;
use crate::error::Result;
use crate::numerics::ConvergenceReport;

/// Conventions that are choices rather than physics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestConventions {
    pub seed_delay_s: f64,
    pub pulsed_seed_duration: String,
    #[serde(rename = "chi3_m2_per_V2")]
    pub chi3_m2_per_v2: f64,
    pub set_linewidth_hz: f64,
    pub notes: Vec<String>,
}

impl ManifestConventions {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            seed_delay_s: cfg.seeds.first().map_or(0.0, |s| s.delay_ps * 1e-12),
            pulsed_seed_duration: "tau_s = 2/sigma_s".into(),
            chi3_m2_per_v2: cfg.chi3_m2_per_v2,
            set_linewidth_hz: cfg.set.linewidth_mhz * 1e6,
            notes: vec![
                "chi3 of fused silica is an assumed constant; absolute fluxes scale with its square".into(),
                "core index follows a Sellmeier law inside the vector mode solve".into(),
                "pump bandwidth enters as the Gaussian width sigma_p in exp(-(omega-omega0)^2/sigma_p^2)".into(),
            ],
        }
    }
}

/// Record written next to every run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub conventions: ManifestConventions,
    pub convergence: Vec<(String, ConvergenceReport)>,
    pub cache: Vec<CacheEvent>,
    pub timings_s: Vec<(String, f64)>,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config_hash: config.hash(),
            config: config.clone(),
            conventions: ManifestConventions::from_config(config),
            convergence: vec![],
            cache: vec![],
            timings_s: vec![],
            outputs: vec![],
            warnings: vec![],
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
