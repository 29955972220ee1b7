use serde::{Deserialize, Serialize};

use super::source::Source;
use crate::error::{Error, Result};

const WINDOW_SCAN_POINTS: usize = 801;
/// |Ξ|² level that defines the phase-matched extent.
pub(crate) const WINDOW_THRESHOLD: f64 = 1e-4;
const WINDOW_EXPANSION: f64 = 0.10;

/// One frequency axis shared by all three photons. The lower edge is
/// shifted so that node triples (i, j, k) with i + j + k = `plane_index`
/// sit exactly on the energy plane ω1+ω2+ω3 = ω0, and ω0/3 is a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub step: f64,
    pub count: usize,
    pub plane_index: usize,
}

impl FrequencyGrid {
    pub fn plane_aligned(omega0: f64, lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Validation("frequency grid needs at least 2 nodes per axis".into()));
        }
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Validation(format!("bad frequency grid bounds [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let m = 3.0 * ((omega0 - 3.0 * lo) / (3.0 * step)).round();
        if m < 0.0 || m > 3.0 * (count - 1) as f64 {
            return Err(Error::Validation("frequency grid does not intersect the energy plane".into()));
        }
        let omega_min = (omega0 - m * step) / 3.0;
        Ok(Self { omega_min, step, count, plane_index: m as usize })
    }

    #[inline]
    pub fn omega(&self, i: usize) -> f64 {
        self.omega_min + self.step * i as f64
    }

    pub fn omega_max(&self) -> f64 {
        self.omega(self.count - 1)
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.omega(i)).collect()
    }

    /// Index of the node at ω0/3.
    pub fn center_index(&self) -> usize {
        self.plane_index / 3
    }
}

/// Frequency band where the CW phase-matching intensity exceeds 1e-4
/// anywhere on the energy plane, widened by 10 %, clipped to the curve span.
pub fn default_window(source: &Source) -> Result<(f64, f64)> {
    let (slo, shi) = source.triplet_curve().span();
    let omega0 = source.omega0();
    let n = WINDOW_SCAN_POINTS;
    let h = (shi - slo) / (n - 1) as f64;
    let w = |i: usize| slo + h * i as f64;
    use rayon::prelude::*;
    let hit: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n).any(|j| {
                let (w1, w2) = (w(i), w(j));
                match source.cw_pm(w1, w2, omega0 - w1 - w2) {
                    Some((xi, _)) => xi * xi > WINDOW_THRESHOLD,
                    None => false,
                }
            })
        })
        .collect();
    let first = hit.iter().position(|&b| b);
    let last = hit.iter().rposition(|&b| b);
    let (Some(a), Some(b)) = (first, last) else {
        return Err(Error::Numerical("no phase-matched emission anywhere in the triplet curve span".into()));
    };
    let (lo, hi) = (w(a.saturating_sub(1)), w((b + 1).min(n - 1)));
    let pad = 0.5 * WINDOW_EXPANSION * (hi - lo);
    Ok(((lo - pad).max(slo), (hi + pad).min(shi)))
}

/// The configured window, or the phase-matched default.
pub fn resolve_window(source: &Source) -> Result<(f64, f64)> {
    match source.config().window_rad_s {
        Some(w) => Ok(w),
        None => default_window(source),
    }
}
