use serde::{Deserialize, Serialize};

use super::material::MaterialIndex;
use crate::error::{Error, Result};

/// Step-index fiber: core of radius `core_radius_m` made of `core`,
/// surrounded by a uniform cladding (air by default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub core_radius_m: f64,
    pub length_m: f64,
    pub cladding_index: f64,
    pub core: MaterialIndex,
}

impl FiberSpec {
    pub fn new(core_radius_m: f64, length_m: f64, cladding_index: f64, core: MaterialIndex) -> Result<Self> {
        let f = Self { core_radius_m, length_m, cladding_index, core };
        f.validate()?;
        Ok(f)
    }

    /// Silica strand in air.
    pub fn silica_in_air(core_radius_m: f64, length_m: f64) -> Result<Self> {
        Self::new(core_radius_m, length_m, 1.0, MaterialIndex::fused_silica())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.core_radius_m > 0.0 && self.core_radius_m.is_finite()) {
            return Err(Error::Validation(format!("core radius must be > 0 (got {})", self.core_radius_m)));
        }
        if !(self.length_m > 0.0 && self.length_m.is_finite()) {
            return Err(Error::Validation(format!("fiber length must be > 0 (got {})", self.length_m)));
        }
        if !(self.cladding_index >= 1.0) {
            return Err(Error::Validation("cladding index must be >= 1".into()));
        }
        self.core.validate()
    }

    /// Core index at `omega`, checked against the cladding.
    pub fn core_index(&self, omega: f64) -> Result<f64> {
        let n1 = self.core.index_at_omega(omega)?;
        if n1 <= self.cladding_index {
            return Err(Error::Validation(format!(
                "core index {n1} does not exceed cladding index {} at {omega:.6e} rad/s",
                self.cladding_index
            )));
        }
        Ok(n1)
    }
}
