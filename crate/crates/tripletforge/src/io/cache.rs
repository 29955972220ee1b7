use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dispersion::{solve_mode, FiberSpec, ModeCurve, ModeLabel};
use crate::error::Result;
use crate::jsa::{Source, SourceConfig};

/// Environment variable that overrides the default cache directory.
pub const CACHE_ENV: &str = "TRIPLETFORGE_CACHE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A cache file existed but could not be used; the curve was re-solved.
    Recovered,
    Disabled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEvent {
    pub mode: String,
    pub key: String,
    pub status: CacheStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CachedFiber {
    r_m: f64,
    #[serde(rename = "L_m")]
    l_m: f64,
    cladding_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CachedMaterial {
    name: String,
    /// (B, C in µm) pairs of the Sellmeier law.
    coefficients: Vec<(f64, f64)>,
    window_m: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CacheFile {
    key: String,
    fiber: CachedFiber,
    material: CachedMaterial,
    mode: ModeLabel,
    omega_rad_s: Vec<f64>,
    n_eff: Vec<f64>,
}

/// Solved mode curves stored as JSON, one file per content hash.
#[derive(Debug, Clone)]
pub struct DispersionCache {
    dir: PathBuf,
}

impl DispersionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// The environment variable wins over the flag; a per-user default last.
    pub fn resolve_dir(flag: Option<&Path>) -> PathBuf {
        if let Some(p) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(p);
        }
        if let Some(p) = flag {
            return p.to_path_buf();
        }
        match std::env::var_os("HOME") {
            Some(home) => PathBuf::from(home).join(".cache").join("tripletforge"),
            None => PathBuf::from(".tripletforge-cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn header(fiber: &FiberSpec) -> (CachedFiber, CachedMaterial) {
        (
            CachedFiber { r_m: fiber.core_radius_m, l_m: fiber.length_m, cladding_n: fiber.cladding_index },
            CachedMaterial {
                name: fiber.core.name.clone(),
                coefficients: fiber.core.b.iter().cloned().zip(fiber.core.c_um.iter().cloned()).collect(),
                window_m: fiber.core.window_m,
            },
        )
    }

    /// Content hash of fiber, material, mode and frequency grid.
    pub fn key(fiber: &FiberSpec, label: ModeLabel, omegas: &[f64]) -> String {
        let (f, m) = Self::header(fiber);
        let mut h = Sha256::new();
        h.update(serde_json::to_string(&(f, m, label)).expect("header serialises").as_bytes());
        for w in omegas {
            h.update(w.to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("mode-{key}.json"))
    }

    fn read(&self, key: &str, label: ModeLabel, omegas: &[f64]) -> std::result::Result<ModeCurve, String> {
        let text = fs::read_to_string(self.path_for(key)).map_err(|e| e.to_string())?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if file.key != key || file.mode != label || file.omega_rad_s != omegas || file.n_eff.len() != omegas.len() {
            return Err("cache content does not match its key".into());
        }
        ModeCurve::new(label, file.omega_rad_s, file.n_eff, crate::dispersion::Provenance::Solved).map_err(|e| e.to_string())
    }

    fn write(&self, key: &str, fiber: &FiberSpec, curve: &ModeCurve) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let (fib, material) = Self::header(fiber);
        let file = CacheFile {
            key: key.into(),
            fiber: fib,
            material,
            mode: curve.label(),
            omega_rad_s: curve.omega_samples().to_vec(),
            n_eff: curve.n_eff_samples().to_vec(),
        };
        // write-then-rename so a crash never leaves a half file under the real name
        let tmp = self.dir.join(format!(".mode-{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&file)?)?;
        fs::rename(&tmp, self.path_for(key))?;
        Ok(())
    }

    /// Cached curve if present and intact, otherwise solve and store.
    pub fn load_or_solve(&self, fiber: &FiberSpec, label: ModeLabel, omegas: &[f64]) -> Result<(ModeCurve, CacheEvent)> {
        let key = Self::key(fiber, label, omegas);
        let path = self.path_for(&key);
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match self.read(&key, label, omegas) {
                Ok(curve) => {
                    info!("dispersion cache hit for {label} ({})", path.display());
                    return Ok((curve, CacheEvent { mode: label.to_string(), key, status: CacheStatus::Hit }));
                }
                Err(e) => {
                    warn!("ignoring unusable cache file {}: {e}; solving again", path.display());
                    status = CacheStatus::Recovered;
                }
            }
        }
        let curve = solve_mode(fiber, label, omegas)?;
        self.write(&key, fiber, &curve)?;
        info!("dispersion cache stored {label} at {}", path.display());
        Ok((curve, CacheEvent { mode: label.to_string(), key, status }))
    }
}

/// Build a source, taking both mode curves from `cache` when given.
pub fn build_source(config: SourceConfig, cache: Option<&DispersionCache>) -> Result<(Source, Vec<CacheEvent>)> {
    config.validate()?;
    let Some(cache) = cache else {
        return Ok((Source::build(config)?, vec![]));
    };
    let (pump, e1) = cache.load_or_solve(&config.fiber, config.pump.mode, &config.pump_grid())?;
    let (triplet, e2) = cache.load_or_solve(&config.fiber, config.triplet_mode, &config.triplet_grid())?;
    Ok((Source::with_curves(config, pump, triplet)?, vec![e1, e2]))
}
