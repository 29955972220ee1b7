use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three-term (or longer) Sellmeier law n^2 = 1 + sum B λ^2 / (λ^2 - C^2),
/// with resonance wavelengths C in micrometres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialIndex {
    pub name: String,
    pub b: Vec<f64>,
    pub c_um: Vec<f64>,
    /// Valid wavelength window in metres.
    pub window_m: (f64, f64),
}

impl MaterialIndex {
    /// Malitson's fused-silica coefficients, valid 0.21-6.7 µm.
    pub fn fused_silica() -> Self {
        Self {
            name: "fused_silica".into(),
            b: vec![0.696_166_3, 0.407_942_6, 0.897_479_4],
            c_um: vec![0.068_404_3, 0.116_241_4, 9.896_161],
            window_m: (0.21e-6, 6.7e-6),
        }
    }

    pub fn new(name: impl Into<String>, b: Vec<f64>, c_um: Vec<f64>, window_m: (f64, f64)) -> Result<Self> {
        let law = Self { name: name.into(), b, c_um, window_m };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.is_empty() || self.b.len() != self.c_um.len() {
            return Err(Error::Validation("Sellmeier law needs matching, non-empty B and C lists".into()));
        }
        let (lo, hi) = self.window_m;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Validation("Sellmeier window must satisfy 0 < min < max".into()));
        }
        // every resonance must sit outside the window or n would blow up inside it
        for &c in &self.c_um {
            let c = c * 1e-6;
            if c >= lo && c <= hi {
                return Err(Error::Validation(format!("Sellmeier pole at {c:.3e} m lies inside the window")));
            }
        }
        Ok(())
    }

    /// Refractive index at vacuum wavelength `lambda_m`.
    pub fn index(&self, lambda_m: f64) -> Result<f64> {
        let (lo, hi) = self.window_m;
        if !(lambda_m >= lo && lambda_m <= hi) {
            return Err(Error::Domain(format!(
                "wavelength {lambda_m:.6e} m outside the {} index window [{lo:.3e}, {hi:.3e}] m",
                self.name
            )));
        }
        let l2 = (lambda_m * 1e6).powi(2);
        let mut n2 = 1.0;
        for (b, c) in self.b.iter().zip(&self.c_um) {
            n2 += b * l2 / (l2 - c * c);
        }
        if !(n2 > 1.0) {
            return Err(Error::Domain(format!("index law gives n^2 = {n2} at {lambda_m:.6e} m")));
        }
        Ok(n2.sqrt())
    }

    pub fn index_at_omega(&self, omega: f64) -> Result<f64> {
        self.index(crate::constants::wavelength_from_omega(omega))
    }
}
