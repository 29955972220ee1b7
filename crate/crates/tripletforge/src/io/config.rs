use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::constants::omega_from_wavelength;
use crate::dispersion::{FiberSpec, MaterialIndex, ModeLabel};
use crate::error::{Error, Result};
use crate::jsa::{PumpSpec, SourceConfig, SpectralKind};
use crate::numerics::QuadratureSpec;
use crate::seeding::{SeedSpec, DEFAULT_OUTPUT_CELLS};

/// Core radius that phase-matches a 532 nm HE12 pump to HE11 triplets.
pub const TUNED_CORE_RADIUS_UM: f64 = 0.395_184_793_18;
/// Pump bandwidth used by the presets, rad/s.
pub const PRESET_PUMP_SIGMA_RAD_S: f64 = 7.48e11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub core_radius_um: f64,
    pub length_cm: f64,
    pub cladding_index: f64,
    /// Core material; fused silica when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialIndex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub kind: SpectralKind,
    pub lambda_nm: f64,
    pub sigma_rad_per_s: f64,
    #[serde(rename = "power_mW")]
    pub power_mw: f64,
    #[serde(rename = "rep_rate_MHz")]
    pub rep_rate_mhz: f64,
    pub mode: ModeLabel,
}

/// Seed template: kind, power and bandwidth, without a wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedTemplate {
    pub kind: SpectralKind,
    #[serde(rename = "power_mW")]
    pub power_mw: f64,
    /// Pulsed seeds only; a tenth of the pump bandwidth when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_rad_per_s: Option<f64>,
    #[serde(default)]
    pub delay_ps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub lambda_nm: f64,
    pub kind: SpectralKind,
    #[serde(rename = "power_mW")]
    pub power_mw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_rad_per_s: Option<f64>,
    #[serde(default)]
    pub delay_ps: f64,
}

impl SeedConfig {
    pub fn template(&self) -> SeedTemplate {
        SeedTemplate {
            kind: self.kind,
            power_mw: self.power_mw,
            sigma_rad_per_s: self.sigma_rad_per_s,
            delay_ps: self.delay_ps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JsiFormat {
    Binary,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsiConfig {
    pub nodes: usize,
    pub format: JsiFormat,
    pub normalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub pump_kind: SpectralKind,
    pub seed: SeedTemplate,
    /// Scan range; the phase-matched window when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max_nm: Option<f64>,
    pub points: usize,
    pub map_points: usize,
    /// Seeds whose single-seed spectra are written out.
    pub spectra_at_nm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablePoint {
    pub label: String,
    pub pump_lambda_nm: f64,
    pub seeds_nm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    #[serde(rename = "seed_power_mW")]
    pub seed_power_mw: f64,
    pub points: Vec<TablePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetConfig {
    pub raster_points: usize,
    #[serde(rename = "power_mW")]
    pub power_mw: f64,
    #[serde(rename = "linewidth_MHz")]
    pub linewidth_mhz: f64,
    pub output_nodes: usize,
    pub diagonal_skip_cells: usize,
    /// Grid of the reference map used for the fidelity figure.
    pub truth_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max_nm: Option<f64>,
}

/// Everything a run needs. Keys carry their units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: String,
    pub fiber: FiberConfig,
    pub pump: PumpConfig,
    pub triplet_mode: ModeLabel,
    #[serde(rename = "chi3_m2_per_V2")]
    pub chi3_m2_per_v2: f64,
    #[serde(default, rename = "gamma_per_W_m", skip_serializing_if = "Option::is_none")]
    pub gamma_per_w_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_nm: Option<(f64, f64)>,
    pub quadrature: QuadratureSpec,
    pub output_cells: usize,
    pub jsi: JsiConfig,
    /// Seeds for a single throughput report, written by `scan`.
    pub seeds: Vec<SeedConfig>,
    pub scan: ScanConfig,
    pub table: TableConfig,
    pub set: SetConfig,
}

fn default_points() -> Vec<TablePoint> {
    let p = |label: &str, pump: f64, seeds: &[f64]| TablePoint {
        label: label.into(),
        pump_lambda_nm: pump,
        seeds_nm: seeds.to_vec(),
    };
    vec![
        p("A", 532.0, &[1596.0]),
        p("B", 531.0, &[1521.0]),
        p("C", 531.0, &[1557.0]),
        p("D", 531.0, &[1532.0, 1664.0]),
    ]
}

impl RunConfig {
    /// Built-in starting points: "degenerate" (532 nm pump) and
    /// "nondegenerate" (531 nm pump), both on the same fiber.
    pub fn preset(name: &str) -> Result<Self> {
        let lambda_p = match name {
            "degenerate" => 532.0,
            "nondegenerate" => 531.0,
            other => {
                return Err(Error::Validation(format!(
                    "unknown preset '{other}' (expected 'degenerate' or 'nondegenerate')"
                )))
            }
        };
        Ok(Self {
            preset: name.into(),
            fiber: FiberConfig { core_radius_um: TUNED_CORE_RADIUS_UM, length_cm: 1.0, cladding_index: 1.0, material: None },
            pump: PumpConfig {
                kind: SpectralKind::Pulsed,
                lambda_nm: lambda_p,
                sigma_rad_per_s: PRESET_PUMP_SIGMA_RAD_S,
                power_mw: 200.0,
                rep_rate_mhz: 10.0,
                mode: ModeLabel::HE12,
            },
            triplet_mode: ModeLabel::HE11,
            chi3_m2_per_v2: 2.5e-22,
            gamma_per_w_m: None,
            window_nm: None,
            quadrature: QuadratureSpec::default(),
            output_cells: DEFAULT_OUTPUT_CELLS,
            jsi: JsiConfig { nodes: 64, format: JsiFormat::Binary, normalized: true },
            seeds: vec![SeedConfig {
                lambda_nm: 3.0 * lambda_p,
                kind: SpectralKind::Monochromatic,
                power_mw: 10.0,
                sigma_rad_per_s: None,
                delay_ps: 0.0,
            }],
            scan: ScanConfig {
                pump_kind: SpectralKind::Monochromatic,
                seed: SeedTemplate { kind: SpectralKind::Monochromatic, power_mw: 10.0, sigma_rad_per_s: None, delay_ps: 0.0 },
                lambda_min_nm: None,
                lambda_max_nm: None,
                points: 121,
                map_points: 121,
                spectra_at_nm: if lambda_p == 532.0 { vec![1500.0, 1550.0, 1596.0, 1650.0, 1700.0] } else { vec![1521.0, 1557.0, 1600.0, 1664.0] },
            },
            table: TableConfig { seed_power_mw: 10.0, points: default_points() },
            set: SetConfig {
                raster_points: 64,
                power_mw: 10.0,
                linewidth_mhz: 1.0,
                output_nodes: 1024,
                diagonal_skip_cells: 1,
                truth_points: 128,
                lambda_min_nm: None,
                lambda_max_nm: None,
            },
        })
    }

    /// Parse a JSON document laid over its preset ("degenerate" when the
    /// document names none). Unknown keys are rejected.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let user: Value =
            serde_json::from_str(text).map_err(|e| Error::Validation(format!("config is not valid JSON: {e}")))?;
        let Value::Object(ref map) = user else {
            return Err(Error::Validation("config must be a JSON object".into()));
        };
        let preset = match map.get("preset") {
            None => "degenerate",
            Some(Value::String(s)) => s.as_str(),
            Some(_) => return Err(Error::Validation("'preset' must be a string".into())),
        };
        let mut base = serde_json::to_value(Self::preset(preset)?)?;
        merge(&mut base, user);
        let cfg: Self = serde_json::from_value(base).map_err(|e| Error::Validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Cross-field checks run before any computation.
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("{what} must be positive, got {v}")))
            }
        };
        pos(self.fiber.core_radius_um, "fiber.core_radius_um")?;
        pos(self.fiber.length_cm, "fiber.length_cm")?;
        pos(self.pump.lambda_nm, "pump.lambda_nm")?;
        if self.pump.kind == SpectralKind::Pulsed {
            pos(self.pump.sigma_rad_per_s, "pump.sigma_rad_per_s")?;
            pos(self.pump.rep_rate_mhz, "pump.rep_rate_MHz")?;
        }
        if !(self.pump.power_mw >= 0.0) {
            return Err(Error::Validation("pump.power_mW must be >= 0".into()));
        }
        if let Some((a, b)) = self.window_nm {
            if !(a > 0.0 && b > a) {
                return Err(Error::Validation(format!("window_nm must satisfy 0 < min < max, got ({a}, {b})")));
            }
        }
        if self.jsi.nodes < 4 {
            return Err(Error::Validation("jsi.nodes must be >= 4".into()));
        }
        if self.output_cells < 2 {
            return Err(Error::Validation("output_cells must be >= 2".into()));
        }
        if self.scan.points < 2 || self.scan.map_points < 2 {
            return Err(Error::Validation("scan.points and scan.map_points must be >= 2".into()));
        }
        if let (Some(a), Some(b)) = (self.scan.lambda_min_nm, self.scan.lambda_max_nm) {
            if !(a > 0.0 && b > a) {
                return Err(Error::Validation("scan range must satisfy 0 < min < max".into()));
            }
        }
        let seeds: Vec<SeedSpec> = self.seeds.iter().map(|s| self.seed_spec(&s.template(), s.lambda_nm)).collect::<Result<_>>()?;
        crate::seeding::check_disjoint(&seeds)?;
        if self.set.raster_points < 2 || self.set.truth_points < 2 {
            return Err(Error::Validation("set.raster_points and set.truth_points must be >= 2".into()));
        }
        pos(self.set.linewidth_mhz, "set.linewidth_MHz")?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn fiber_spec(&self) -> Result<FiberSpec> {
        FiberSpec::new(
            self.fiber.core_radius_um * 1e-6,
            self.fiber.length_cm * 1e-2,
            self.fiber.cladding_index,
            self.fiber.material.clone().unwrap_or_else(MaterialIndex::fused_silica),
        )
    }

    pub fn pump_spec(&self, kind: SpectralKind, lambda_nm: f64) -> PumpSpec {
        let w0 = omega_from_wavelength(lambda_nm * 1e-9);
        let p = self.pump.power_mw * 1e-3;
        match kind {
            SpectralKind::Pulsed => {
                PumpSpec::pulsed(w0, self.pump.sigma_rad_per_s, p, self.pump.rep_rate_mhz * 1e6, self.pump.mode)
            }
            SpectralKind::Monochromatic => PumpSpec::cw(w0, p, self.pump.mode),
        }
    }

    /// Source for the configured pump, optionally with another spectral kind
    /// or wavelength.
    pub fn source_config(&self, kind: Option<SpectralKind>, lambda_nm: Option<f64>) -> Result<SourceConfig> {
        let lambda = lambda_nm.unwrap_or(self.pump.lambda_nm);
        let mut cfg = SourceConfig::new(self.fiber_spec()?, self.pump_spec(kind.unwrap_or(self.pump.kind), lambda), self.triplet_mode);
        cfg.chi3_m2_per_v2 = self.chi3_m2_per_v2;
        cfg.gamma_override = self.gamma_per_w_m;
        // a fixed window belongs to the configured pump wavelength only
        if lambda_nm.is_none() || lambda_nm == Some(self.pump.lambda_nm) {
            cfg.window_rad_s = self
                .window_nm
                .map(|(a, b)| (omega_from_wavelength(b * 1e-9), omega_from_wavelength(a * 1e-9)));
        }
        cfg.quadrature = self.quadrature.clone();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn seed_spec(&self, t: &SeedTemplate, lambda_nm: f64) -> Result<SeedSpec> {
        let w = omega_from_wavelength(lambda_nm * 1e-9);
        let p = t.power_mw * 1e-3;
        let spec = match t.kind {
            SpectralKind::Monochromatic => SeedSpec::cw(w, p),
            SpectralKind::Pulsed => SeedSpec {
                delay_s: t.delay_ps * 1e-12,
                rep_rate_hz: Some(self.pump.rep_rate_mhz * 1e6),
                ..SeedSpec::pulsed(w, t.sigma_rad_per_s.unwrap_or(self.pump.sigma_rad_per_s / 10.0), p)
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Overlay `patch` onto `base`, recursing into objects.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, p) => *slot = p,
    }
}
