use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::Spectrum;
use super::seed::{check_disjoint, pump_photons_in_seed_window, seed_photon_number, SeedSpec};
use super::theta::{Seeder, Theta};
use crate::constants::wavelength_from_omega;
use crate::error::Result;
use crate::jsa::SpectralKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContributionKind {
    Spontaneous,
    Single,
    SelfDouble,
    CrossDouble,
}

/// One term of the seeded output, e.g. "seed 0 alone" or "seeds 0 and 1 together".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub kind: ContributionKind,
    pub seeds: Vec<usize>,
    pub flux_per_s: f64,
    /// Θ1 or Θ2 behind this term (absent for the spontaneous one).
    pub theta: Option<f64>,
    pub theta_rel_error: Option<f64>,
    pub spectrum: Option<Spectrum>,
}

/// Conventions that are choices rather than physics, recorded with every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub chi3_m2_per_v2: f64,
    pub gamma_per_w_m: f64,
    pub n0: f64,
    pub window_nm: (f64, f64),
    pub seed_delays_s: Vec<f64>,
    /// |αp|² = P τs/(ħω0) with τs = 2/σs, per seed (CW pump with pulsed seeds only).
    pub pump_photons_per_seed_pulse: Vec<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    pub pump_kind: SpectralKind,
    pub seed_kind: Option<SpectralKind>,
    pub n0_per_s: f64,
    pub n1_per_s: f64,
    pub n2_per_s: f64,
    pub n1_spectrum: Option<Spectrum>,
    pub n2_spectrum: Option<Spectrum>,
    /// Per pulse for pulsed seeds, per second for CW seeds.
    pub seed_photon_numbers: Vec<f64>,
    pub contributions: Vec<Contribution>,
    pub conventions: Conventions,
    pub warnings: Vec<String>,
}

impl ThroughputReport {
    pub fn contribution(&self, kind: ContributionKind, seeds: &[usize]) -> Option<&Contribution> {
        self.contributions.iter().find(|c| c.kind == kind && c.seeds == seeds)
    }
}

impl Seeder {
    /// Converts N0 |β|² Θ products into photons per second: only a CW pump
    /// with pulsed seeds yields a per-pulse number that needs R.
    pub(crate) fn rate_factor(&self, seed: &SeedSpec) -> Result<f64> {
        if !self.source().pump().is_pulsed() && seed.is_pulsed() {
            seed.rep_rate(self.source().pump())
        } else {
            Ok(1.0)
        }
    }

    pub(crate) fn conventions(&self, seeds: &[SeedSpec]) -> Conventions {
        let src = self.source();
        let pump = src.pump();
        let (lo, hi) = self.window();
        let mut notes = vec![
            "overlaps use unit-norm seed envelopes: Theta = J / (n0 * spontaneous integral)".to_string(),
            "cross double-seed terms carry 2*N0 per unordered seed pair, self terms N0/2".to_string(),
        ];
        if pump.is_pulsed() {
            notes.push("pulsed pump: per-pulse quantities multiplied by R".into());
        } else if seeds.iter().any(|s| s.is_pulsed()) {
            notes.push("CW pump, pulsed seeds: Theta has units of time; per-pulse fluxes multiplied by the seed R".into());
        }
        if seeds.iter().any(|s| s.is_pulsed()) {
            notes.push(format!("single-seed spectra exclude ±{} sigma_s around each seed", super::theta::PULSED_EXCLUSION_SIGMAS));
        } else if !seeds.is_empty() {
            notes.push(format!("single-seed spectra exclude ±{} output cells around each seed", super::theta::CW_EXCLUSION_CELLS));
            if !pump.is_pulsed() {
                notes.push("CW-CW double seeding evaluated at omega1 = omega0 - omega_a - omega_b".into());
            }
        }
        Conventions {
            chi3_m2_per_v2: src.config().chi3_m2_per_v2,
            gamma_per_w_m: src.gamma(),
            n0: src.n0(),
            window_nm: (wavelength_from_omega(hi) * 1e9, wavelength_from_omega(lo) * 1e9),
            seed_delays_s: seeds.iter().map(|s| s.delay_s).collect(),
            pump_photons_per_seed_pulse: if !pump.is_pulsed() {
                seeds.iter().filter(|s| s.is_pulsed()).map(|s| pump_photons_in_seed_window(s, pump)).collect()
            } else {
                vec![]
            },
            notes,
        }
    }

    /// All seeded contributions for a set of disjoint seeds.
    pub fn throughput(&self, seeds: &[SeedSpec], spectra: bool) -> Result<ThroughputReport> {
        for s in seeds {
            s.validate()?;
        }
        check_disjoint(seeds)?;
        let pump = self.source().pump();
        let n0 = self.spontaneous().n0_per_s;
        let beta2: Vec<f64> = seeds.iter().map(|s| seed_photon_number(s, pump)).collect::<Result<_>>()?;
        let rates: Vec<f64> = seeds.iter().map(|s| self.rate_factor(s)).collect::<Result<_>>()?;

        let singles: Vec<Theta> = seeds.par_iter().map(|s| self.theta_single(s, spectra)).collect::<Result<_>>()?;
        let pairs: Vec<(usize, usize)> = (0..seeds.len()).flat_map(|i| (i..seeds.len()).map(move |j| (i, j))).collect();
        let doubles: Vec<Theta> =
            pairs.par_iter().map(|&(i, j)| self.theta_double(&seeds[i], &seeds[j], spectra)).collect::<Result<_>>()?;

        let mut contributions = vec![Contribution {
            kind: ContributionKind::Spontaneous,
            seeds: vec![],
            flux_per_s: n0,
            theta: None,
            theta_rel_error: None,
            spectrum: None,
        }];
        let mut warnings = Vec::new();
        let mut n1_spec = spectra.then(|| Spectrum::zeros(self.output()));
        let mut n2_spec = n1_spec.clone();
        let (mut n1, mut n2) = (0.0, 0.0);
        for (i, th) in singles.iter().enumerate() {
            let k = 2.0 * n0 * beta2[i] * rates[i];
            n1 += k * th.value;
            let spectrum = th.spectrum.as_ref().map(|s| s.scaled(k));
            if let (Some(acc), Some(s)) = (n1_spec.as_mut(), spectrum.as_ref()) {
                acc.add_assign(s);
            }
            warnings.extend(th.warnings.iter().map(|w| format!("seed {i}: {w}")));
            contributions.push(Contribution {
                kind: ContributionKind::Single,
                seeds: vec![i],
                flux_per_s: k * th.value,
                theta: Some(th.value),
                theta_rel_error: Some(th.rel_error),
                spectrum,
            });
        }
        for (&(i, j), th) in pairs.iter().zip(&doubles) {
            let (kind, k) = if i == j {
                (ContributionKind::SelfDouble, 0.5 * n0 * beta2[i] * beta2[i] * rates[i])
            } else {
                (ContributionKind::CrossDouble, 2.0 * n0 * beta2[i] * beta2[j] * rates[i])
            };
            n2 += k * th.value;
            let spectrum = th.spectrum.as_ref().map(|s| s.scaled(k));
            if let (Some(acc), Some(s)) = (n2_spec.as_mut(), spectrum.as_ref()) {
                acc.add_assign(s);
            }
            warnings.extend(th.warnings.iter().map(|w| format!("seeds {i},{j}: {w}")));
            contributions.push(Contribution {
                kind,
                seeds: vec![i, j],
                flux_per_s: k * th.value,
                theta: Some(th.value),
                theta_rel_error: Some(th.rel_error),
                spectrum,
            });
        }
        Ok(ThroughputReport {
            pump_kind: pump.kind,
            seed_kind: seeds.first().map(|s| s.kind),
            n0_per_s: n0,
            n1_per_s: n1,
            n2_per_s: n2,
            n1_spectrum: n1_spec,
            n2_spectrum: n2_spec,
            seed_photon_numbers: beta2,
            contributions,
            conventions: self.conventions(seeds),
            warnings,
        })
    }
}
