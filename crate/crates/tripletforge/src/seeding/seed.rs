use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::jsa::{PumpSpec, SpectralKind};
use crate::numerics::{composite_rule, FixedRule};

/// Gaussian seeds are cut at this many σs.
pub const SEED_REACH_SIGMAS: f64 = 5.0;
/// Default optical linewidth of a CW seed used to define δk.
pub const DEFAULT_SEED_LINEWIDTH_HZ: f64 = 1e6;
const SEED_NODES_PANELS: usize = 10;

/// One seed field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub kind: SpectralKind,
    /// Central (pulsed) or line (CW) angular frequency.
    pub omega: f64,
    /// Amplitude bandwidth σs; pulsed only.
    pub sigma_rad_s: f64,
    pub power_w: f64,
    /// Pump-to-seed delay t0; pulsed only.
    pub delay_s: f64,
    /// Repetition rate of a pulsed seed; falls back to the pump's.
    pub rep_rate_hz: Option<f64>,
    /// Linewidth δν of a CW seed, used only by tomography.
    pub linewidth_hz: f64,
}

impl SeedSpec {
    pub fn pulsed(omega: f64, sigma_rad_s: f64, power_w: f64) -> Self {
        Self {
            kind: SpectralKind::Pulsed,
            omega,
            sigma_rad_s,
            power_w,
            delay_s: 0.0,
            rep_rate_hz: None,
            linewidth_hz: DEFAULT_SEED_LINEWIDTH_HZ,
        }
    }

    pub fn cw(omega: f64, power_w: f64) -> Self {
        Self {
            kind: SpectralKind::Monochromatic,
            omega,
            sigma_rad_s: 0.0,
            power_w,
            delay_s: 0.0,
            rep_rate_hz: None,
            linewidth_hz: DEFAULT_SEED_LINEWIDTH_HZ,
        }
    }

    pub fn with_power(&self, power_w: f64) -> Self {
        Self { power_w, ..self.clone() }
    }

    pub fn at_omega(&self, omega: f64) -> Self {
        Self { omega, ..self.clone() }
    }

    pub fn is_pulsed(&self) -> bool {
        self.kind == SpectralKind::Pulsed
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::Validation(format!("seed frequency must be positive, got {}", self.omega)));
        }
        if !(self.power_w >= 0.0 && self.power_w.is_finite()) {
            return Err(Error::Validation(format!("seed power must be >= 0, got {}", self.power_w)));
        }
        if self.is_pulsed() && !(self.sigma_rad_s > 0.0) {
            return Err(Error::Validation("pulsed seed needs a positive bandwidth".into()));
        }
        if !(self.linewidth_hz > 0.0) {
            return Err(Error::Validation("seed linewidth must be positive".into()));
        }
        if let Some(r) = self.rep_rate_hz {
            if !(r > 0.0) {
                return Err(Error::Validation("seed repetition rate must be positive".into()));
            }
        }
        Ok(())
    }

    /// Repetition rate of a pulsed seed, checked against the pump.
    pub fn rep_rate(&self, pump: &PumpSpec) -> Result<f64> {
        match (self.rep_rate_hz, pump.is_pulsed()) {
            (Some(r), true) if r != pump.rep_rate_hz => Err(Error::Validation(format!(
                "pulsed seed at {r} Hz cannot be synchronised with a pump at {} Hz",
                pump.rep_rate_hz
            ))),
            (Some(r), _) => Ok(r),
            (None, true) => Ok(pump.rep_rate_hz),
            (None, false) => Err(Error::Validation(
                "a pulsed seed with a CW pump needs its own repetition rate".into(),
            )),
        }
    }

    /// Effective seed pulse duration τs = 2/σs.
    pub fn duration_s(&self) -> f64 {
        2.0 / self.sigma_rad_s
    }

    /// Interval outside which the seed envelope is treated as zero.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            SpectralKind::Pulsed => {
                let r = SEED_REACH_SIGMAS * self.sigma_rad_s;
                (self.omega - r, self.omega + r)
            }
            SpectralKind::Monochromatic => (self.omega, self.omega),
        }
    }

    /// Unit-norm Gaussian envelope β̃(ω) = (2/(πσs²))^{1/4} exp(-(ω-ωs)²/σs²) exp(iωt0).
    pub fn envelope(&self, omega: f64) -> Complex64 {
        let x = (omega - self.omega) / self.sigma_rad_s;
        let a = (2.0 / (PI * self.sigma_rad_s * self.sigma_rad_s)).powf(0.25) * (-x * x).exp();
        Complex64::from_polar(a, omega * self.delay_s)
    }
}

/// Mean seed photon number: per pulse for a pulsed seed, per second for a CW seed.
pub fn seed_photon_number(seed: &SeedSpec, pump: &PumpSpec) -> Result<f64> {
    seed.validate()?;
    let photon = HBAR * seed.omega;
    match seed.kind {
        SpectralKind::Pulsed => Ok(seed.power_w / (seed.rep_rate(pump)? * photon)),
        SpectralKind::Monochromatic => Ok(seed.power_w / photon),
    }
}

/// Pump photons overlapping one seed pulse, |αp|² = P τs / (ħ ω0). Reported
/// for CW-pump/pulsed-seed runs; it is a declared convention, not an input.
pub fn pump_photons_in_seed_window(seed: &SeedSpec, pump: &PumpSpec) -> f64 {
    pump.power_w * seed.duration_s() / (HBAR * pump.omega0)
}

/// Spectral envelope used inside overlap integrals: a single seed, or
/// several disjoint seeds merged into one effective seed.
#[derive(Debug, Clone)]
pub struct SeedEnvelope {
    parts: Vec<(f64, SeedSpec)>,
}

impl SeedEnvelope {
    pub fn single(seed: &SeedSpec) -> Self {
        Self { parts: vec![(1.0, seed.clone())] }
    }

    /// β_eff β̃_eff = Σ βi β̃i with |β_eff|² = Σ|βi|²; weights are βi/β_eff.
    pub fn merged(seeds: &[SeedSpec], photon_numbers: &[f64]) -> Result<Self> {
        if seeds.is_empty() || seeds.len() != photon_numbers.len() {
            return Err(Error::Validation("merged envelope needs one photon number per seed".into()));
        }
        if seeds.iter().any(|s| !s.is_pulsed()) {
            return Err(Error::Validation("only pulsed seeds can be merged into one envelope".into()));
        }
        let total: f64 = photon_numbers.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Validation("merged envelope needs a positive total photon number".into()));
        }
        let parts = seeds.iter().zip(photon_numbers).map(|(s, n)| ((n / total).sqrt(), s.clone())).collect();
        Ok(Self { parts })
    }

    pub fn value(&self, omega: f64) -> Complex64 {
        self.parts.iter().map(|(c, s)| s.envelope(omega) * *c).sum()
    }

    /// Quadrature rules covering each part's support.
    pub(crate) fn rules(&self) -> Vec<FixedRule> {
        self.parts
            .iter()
            .map(|(_, s)| {
                let (a, b) = s.support();
                composite_rule(a, b, SEED_NODES_PANELS, 8)
            })
            .collect()
    }

    pub(crate) fn supports(&self) -> Vec<(f64, f64)> {
        self.parts.iter().map(|(_, s)| s.support()).collect()
    }

    pub(crate) fn max_sigma(&self) -> f64 {
        self.parts.iter().map(|(_, s)| s.sigma_rad_s).fold(0.0, f64::max)
    }
}

/// Reject seed sets the disjoint-seed treatment cannot describe.
pub fn check_disjoint(seeds: &[SeedSpec]) -> Result<()> {
    for (i, a) in seeds.iter().enumerate() {
        for b in &seeds[i + 1..] {
            if a.kind != b.kind {
                return Err(Error::Validation("mixing pulsed and CW seeds is not supported".into()));
            }
            let sep = (a.omega - b.omega).abs();
            let need = match a.kind {
                SpectralKind::Pulsed => 3.0 * (a.sigma_rad_s + b.sigma_rad_s),
                SpectralKind::Monochromatic => 0.0,
            };
            if !(sep > need) {
                return Err(Error::Validation(format!(
                    "seeds at {:.6e} and {:.6e} rad/s overlap spectrally; seeds must be disjoint",
                    a.omega, b.omega
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::omega_from_wavelength;
    use crate::dispersion::ModeLabel;

    #[test]
    fn photon_numbers_match_hand_arithmetic() {
        let w = omega_from_wavelength(1.596e-6);
        let pump = PumpSpec::pulsed(3.0 * w, 7.48e11, 0.2, 1e7, ModeLabel::HE12);
        let cw = seed_photon_number(&SeedSpec::cw(w, 10e-3), &pump).unwrap();
        assert!((cw / 8.03e16 - 1.0).abs() < 1e-3, "{cw}");
        let p = seed_photon_number(&SeedSpec::pulsed(w, 7.48e10, 10e-3), &pump).unwrap();
        assert!((p / 8.03e9 - 1.0).abs() < 1e-3, "{p}");
        assert_eq!(seed_photon_number(&SeedSpec::cw(w, 0.0), &pump).unwrap(), 0.0);
        let cw_pump = PumpSpec::cw(3.0 * w, 0.2, ModeLabel::HE12);
        assert!(seed_photon_number(&SeedSpec::pulsed(w, 7.48e10, 10e-3), &cw_pump).is_err());
    }

    #[test]
    fn envelope_has_unit_norm() {
        let s = SeedSpec { delay_s: 3e-13, ..SeedSpec::pulsed(1.2e15, 7e10, 1e-3) };
        let env = SeedEnvelope::single(&s);
        let rule = &env.rules()[0];
        let n: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * env.value(*x).norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-10, "{n}");
    }

    #[test]
    fn disjointness_rules() {
        let a = SeedSpec::pulsed(1.20e15, 7e10, 1e-3);
        assert!(check_disjoint(&[a.clone(), a.at_omega(1.2e15 + 5e11)]).is_ok());
        assert!(check_disjoint(&[a.clone(), a.at_omega(1.2e15 + 3e11)]).is_err());
        assert!(check_disjoint(&[a.clone(), SeedSpec::cw(1.3e15, 1e-3)]).is_err());
        assert!(check_disjoint(&[SeedSpec::cw(1.3e15, 1e-3), SeedSpec::cw(1.3e15, 1e-3)]).is_err());
    }
}
