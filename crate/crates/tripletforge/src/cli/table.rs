use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{build_source, DispersionCache, RunConfig, SeedTemplate};
use crate::jsa::SpectralKind;
use crate::seeding::{ContributionKind, Seeder, ThroughputReport};

/// Fluxes below this fraction of the largest flux of the same kind
/// (single or double) within one pump/seed combination are reported as 0:
/// they sit under the accuracy of the quadrature that produced the peak.
pub const TABLE_ZERO_FLOOR: f64 = 1e-15;

/// Pump/seed kind pairs in the order they are tabulated.
pub const COMBINATIONS: [(SpectralKind, SpectralKind); 4] = [
    (SpectralKind::Pulsed, SpectralKind::Pulsed),
    (SpectralKind::Monochromatic, SpectralKind::Monochromatic),
    (SpectralKind::Pulsed, SpectralKind::Monochromatic),
    (SpectralKind::Monochromatic, SpectralKind::Pulsed),
];

pub fn combination_name(pump: SpectralKind, seed: SpectralKind) -> String {
    let n = |k: SpectralKind| match k {
        SpectralKind::Pulsed => "pulsed",
        SpectralKind::Monochromatic => "mc",
    };
    format!("{}-{}", n(pump), n(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "N_I")]
    Single,
    #[serde(rename = "N_II")]
    Double,
}

/// One cell of the throughput table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub combination: String,
    pub point: String,
    pub quantity: Quantity,
    pub lambda1_nm: f64,
    /// Second seed wavelength of a double-seed entry (equal to the first for self terms).
    pub lambda2_nm: Option<f64>,
    pub flux_per_s: f64,
    /// Flux before the zero floor was applied.
    pub raw_flux_per_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputTable {
    pub entries: Vec<TableEntry>,
    pub n0_per_s: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl ThroughputTable {
    pub fn get(&self, combination: &str, point: &str, quantity: Quantity, l1: f64, l2: Option<f64>) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| {
                e.combination == combination
                    && e.point == point
                    && e.quantity == quantity
                    && (e.lambda1_nm - l1).abs() < 1e-9
                    && match (e.lambda2_nm, l2) {
                        (Some(a), Some(b)) => (a - b).abs() < 1e-9,
                        (None, None) => true,
                        _ => false,
                    }
            })
            .map(|e| e.flux_per_s)
    }
}

fn entries_from(report: &ThroughputReport, combination: &str, point: &str, lambdas: &[f64]) -> Vec<TableEntry> {
    report
        .contributions
        .iter()
        .filter_map(|c| {
            let (quantity, l1, l2) = match c.kind {
                ContributionKind::Spontaneous => return None,
                ContributionKind::Single => (Quantity::Single, lambdas[c.seeds[0]], None),
                ContributionKind::SelfDouble | ContributionKind::CrossDouble => {
                    (Quantity::Double, lambdas[c.seeds[0]], Some(lambdas[c.seeds[1]]))
                }
            };
            Some(TableEntry {
                combination: combination.into(),
                point: point.into(),
                quantity,
                lambda1_nm: l1,
                lambda2_nm: l2,
                flux_per_s: c.flux_per_s,
                raw_flux_per_s: c.flux_per_s,
            })
        })
        .collect()
}

/// Seeded throughput at every table point for all four pump/seed kinds.
pub fn throughput_table(cfg: &RunConfig, cache: Option<&DispersionCache>) -> Result<ThroughputTable> {
    if cfg.table.points.is_empty() {
        return Err(Error::Validation("table needs at least one point".into()));
    }
    let mut entries = Vec::new();
    let mut n0 = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut seeders: BTreeMap<(String, u64), Seeder> = BTreeMap::new();
    for (pump_kind, seed_kind) in COMBINATIONS {
        let name = combination_name(pump_kind, seed_kind);
        let template = SeedTemplate { kind: seed_kind, power_mw: cfg.table.seed_power_mw, sigma_rad_per_s: None, delay_ps: 0.0 };
        for point in &cfg.table.points {
            if point.seeds_nm.is_empty() {
                return Err(Error::Validation(format!("table point {} has no seeds", point.label)));
            }
            let key = (pump_kind.to_string(), point.pump_lambda_nm.to_bits());
            if !seeders.contains_key(&key) {
                let sc = cfg.source_config(Some(pump_kind), Some(point.pump_lambda_nm))?;
                let (source, _) = build_source(sc, cache)?;
                seeders.insert(key.clone(), Seeder::new(&source)?);
            }
            let seeder = &seeders[&key];
            let seeds = point.seeds_nm.iter().map(|&l| cfg.seed_spec(&template, l)).collect::<Result<Vec<_>>>()?;
            let report = seeder.throughput(&seeds, false)?;
            n0.insert(format!("{name}@{}nm", point.pump_lambda_nm), report.n0_per_s);
            warnings.extend(report.warnings.iter().map(|w| format!("{name} {}: {w}", point.label)));
            entries.extend(entries_from(&report, &name, &point.label, &point.seeds_nm));
        }
    }
    for (pump_kind, seed_kind) in COMBINATIONS {
        let name = combination_name(pump_kind, seed_kind);
        for q in [Quantity::Single, Quantity::Double] {
            let peak = entries
                .iter()
                .filter(|e| e.combination == name && e.quantity == q)
                .map(|e| e.raw_flux_per_s)
                .fold(0.0, f64::max);
            for e in entries.iter_mut().filter(|e| e.combination == name && e.quantity == q) {
                if e.raw_flux_per_s < TABLE_ZERO_FLOOR * peak {
                    e.flux_per_s = 0.0;
                }
            }
        }
    }
    Ok(ThroughputTable { entries, n0_per_s: n0, warnings })
}
