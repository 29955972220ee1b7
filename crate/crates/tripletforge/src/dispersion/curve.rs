use serde::{Deserialize, Serialize};

use super::mode::ModeLabel;
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::numerics::CubicSpline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Solved,
    Tabulated,
}

/// Effective index of one mode sampled on an angular-frequency grid and
/// interpolated by a cubic spline. Derivatives come from the spline itself.
#[derive(Debug, Clone)]
pub struct ModeCurve {
    label: ModeLabel,
    provenance: Provenance,
    spline: CubicSpline,
}

impl ModeCurve {
    pub fn new(label: ModeLabel, omega: Vec<f64>, n_eff: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if n_eff.iter().any(|&n| !(n > 0.0)) {
            return Err(Error::Validation(format!("{label}: effective indices must be positive")));
        }
        let k: Vec<f64> = omega.iter().zip(&n_eff).map(|(w, n)| n * w / SPEED_OF_LIGHT).collect();
        if k.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::Validation(format!("{label}: k(ω) must be strictly increasing")));
        }
        let spline = CubicSpline::new(omega, n_eff)?;
        Ok(Self { label, provenance, spline })
    }

    /// User-supplied dispersion (for instance measured or from another solver).
    pub fn tabulated(label: ModeLabel, omega: Vec<f64>, n_eff: Vec<f64>) -> Result<Self> {
        Self::new(label, omega, n_eff, Provenance::Tabulated)
    }

    /// Dispersionless curve k = n ω / c, mostly useful for tests.
    pub fn constant_index(label: ModeLabel, n: f64, omega_lo: f64, omega_hi: f64, points: usize) -> Result<Self> {
        let omega = super::solver::uniform_omega_grid(omega_lo, omega_hi, points);
        let len = omega.len();
        Self::tabulated(label, omega, vec![n; len])
    }

    pub fn label(&self) -> ModeLabel {
        self.label
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn omega_samples(&self) -> &[f64] {
        self.spline.knots()
    }

    pub fn n_eff_samples(&self) -> &[f64] {
        self.spline.values()
    }

    pub fn span(&self) -> (f64, f64) {
        self.spline.span()
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.spline.contains(omega)
    }

    pub fn n_eff(&self, omega: f64) -> Result<f64> {
        self.spline.eval(omega)
    }

    pub fn k(&self, omega: f64) -> Result<f64> {
        Ok(self.n_eff(omega)? * omega / SPEED_OF_LIGHT)
    }

    /// dk/dω = (n + ω dn/dω) / c.
    pub fn dk_domega(&self, omega: f64) -> Result<f64> {
        let n = self.spline.eval(omega)?;
        let dn = self.spline.derivative(omega)?;
        Ok((n + omega * dn) / SPEED_OF_LIGHT)
    }

    pub fn group_velocity(&self, omega: f64) -> Result<f64> {
        let v = 1.0 / self.dk_domega(omega)?;
        if !(v > 0.0) {
            return Err(Error::Numerical(format!("{}: non-positive group velocity at {omega:.6e}", self.label)));
        }
        Ok(v)
    }

    #[inline]
    pub(crate) fn n_eff_unchecked(&self, omega: f64) -> f64 {
        self.spline.eval_unchecked(omega)
    }

    #[inline]
    pub(crate) fn k_unchecked(&self, omega: f64) -> f64 {
        self.spline.eval_unchecked(omega) * omega / SPEED_OF_LIGHT
    }

    /// Second derivative d²k/dω² by central difference of the spline slope.
    pub fn gvd(&self, omega: f64) -> Result<f64> {
        let (a, b) = self.span();
        let h = (b - a) * 1e-4;
        let lo = (omega - h).max(a);
        let hi = (omega + h).min(b);
        Ok((self.dk_domega(hi)? - self.dk_domega(lo)?) / (hi - lo))
    }
}
