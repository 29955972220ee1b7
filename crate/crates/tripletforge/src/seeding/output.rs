use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{omega_from_wavelength, wavelength_from_omega};
use crate::error::{Error, Result};
use crate::numerics::{composite_rule, pairwise_sum};

/// Wavelength axis of emitted spectra: `cells` equal bins in λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputGrid {
    pub lambda_min_m: f64,
    pub lambda_max_m: f64,
    pub cells: usize,
}

impl OutputGrid {
    pub fn new(lambda_min_m: f64, lambda_max_m: f64, cells: usize) -> Result<Self> {
        if !(lambda_min_m > 0.0 && lambda_max_m > lambda_min_m) || cells < 2 {
            return Err(Error::Validation(format!(
                "bad output grid [{lambda_min_m}, {lambda_max_m}] m with {cells} cells"
            )));
        }
        Ok(Self { lambda_min_m, lambda_max_m, cells })
    }

    /// Grid covering an angular-frequency window.
    pub fn from_window(window: (f64, f64), cells: usize) -> Result<Self> {
        Self::new(wavelength_from_omega(window.1), wavelength_from_omega(window.0), cells)
    }

    pub fn cell_width_m(&self) -> f64 {
        (self.lambda_max_m - self.lambda_min_m) / self.cells as f64
    }

    pub fn edge_m(&self, k: usize) -> f64 {
        if k == self.cells {
            self.lambda_max_m
        } else {
            self.lambda_min_m + self.cell_width_m() * k as f64
        }
    }

    pub fn centers_nm(&self) -> Vec<f64> {
        (0..self.cells).map(|k| 0.5 * (self.edge_m(k) + self.edge_m(k + 1)) * 1e9).collect()
    }

    /// Cell k as an angular-frequency interval (lo, hi).
    pub fn cell_omega(&self, k: usize) -> (f64, f64) {
        (omega_from_wavelength(self.edge_m(k + 1)), omega_from_wavelength(self.edge_m(k)))
    }

    /// Cell containing angular frequency ω, if any.
    pub fn cell_of_omega(&self, omega: f64) -> Option<usize> {
        let lam = wavelength_from_omega(omega);
        if !(lam >= self.lambda_min_m && lam < self.lambda_max_m) {
            return None;
        }
        Some((((lam - self.lambda_min_m) / self.cell_width_m()) as usize).min(self.cells - 1))
    }

    /// Half-width in ω of `n` cells around ω (for CW seed exclusion).
    pub fn omega_halfwidth_cells(&self, omega: f64, n: f64) -> f64 {
        let lam = wavelength_from_omega(omega);
        let dl = n * self.cell_width_m();
        0.5 * (omega_from_wavelength(lam - dl) - omega_from_wavelength(lam + dl))
    }
}

/// A spectral density in per-nm units, averaged over the cells of an
/// [`OutputGrid`]: the entry for a cell is its integral divided by its width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lambda_nm: Vec<f64>,
    pub per_nm: Vec<f64>,
}

impl Spectrum {
    pub fn zeros(grid: &OutputGrid) -> Self {
        Self { lambda_nm: grid.centers_nm(), per_nm: vec![0.0; grid.cells] }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { lambda_nm: self.lambda_nm.clone(), per_nm: self.per_nm.iter().map(|v| v * k).collect() }
    }

    pub fn add_assign(&mut self, other: &Spectrum) {
        for (a, b) in self.per_nm.iter_mut().zip(&other.per_nm) {
            *a += b;
        }
    }

    /// Midpoint sum over cells: exactly the integral of the cell averages.
    pub fn total(&self) -> f64 {
        if self.lambda_nm.len() < 2 {
            return 0.0;
        }
        let w = self.lambda_nm[1] - self.lambda_nm[0];
        pairwise_sum(&self.per_nm) * w
    }

    /// Trapezoid integral over the emitted sample points.
    pub fn trapezoid(&self) -> f64 {
        let terms: Vec<f64> = self
            .lambda_nm
            .windows(2)
            .zip(self.per_nm.windows(2))
            .map(|(l, v)| 0.5 * (l[1] - l[0]) * (v[0] + v[1]))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Narrow structure that cell integration must resolve: breakpoints are
/// placed every `scale` within ±16·scale of `center`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Feature {
    pub center: f64,
    pub scale: f64,
}

const CELL_ORDER: usize = 8;
const FEATURE_REACH: i32 = 16;

/// Integrate `density(ω)` over every output cell, restricted to `support`
/// and with `exclude` cut out. Returns per-nm cell averages.
pub(crate) fn cell_average<F>(
    grid: &OutputGrid,
    density: F,
    support: (f64, f64),
    exclude: Option<(f64, f64)>,
    features: &[Feature],
) -> Spectrum
where
    F: Fn(f64) -> f64 + Sync,
{
    let width_nm = grid.cell_width_m() * 1e9;
    let per_nm: Vec<f64> = (0..grid.cells)
        .into_par_iter()
        .map(|k| {
            let (a, b) = grid.cell_omega(k);
            let (a, b) = (a.max(support.0), b.min(support.1));
            if !(b > a) {
                return 0.0;
            }
            let mut pieces = vec![(a, b)];
            if let Some((ea, eb)) = exclude {
                pieces = pieces
                    .into_iter()
                    .flat_map(|(x, y)| {
                        let mut out = Vec::new();
                        if ea > x {
                            out.push((x, ea.min(y)));
                        }
                        if eb < y {
                            out.push((eb.max(x), y));
                        }
                        out.into_iter().filter(|(p, q)| q > p)
                    })
                    .collect();
            }
            let mut parts = Vec::new();
            for (x, y) in pieces {
                let mut cuts = vec![x, y];
                for f in features {
                    for t in -FEATURE_REACH..=FEATURE_REACH {
                        let c = f.center + f.scale * t as f64;
                        if c > x && c < y {
                            cuts.push(c);
                        }
                    }
                }
                cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
                for w in cuts.windows(2) {
                    let rule = composite_rule(w[0], w[1], 1, CELL_ORDER);
                    let vals: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(x, wt)| wt * density(*x)).collect();
                    parts.push(pairwise_sum(&vals));
                }
            }
            pairwise_sum(&parts) / width_nm
        })
        .collect();
    Spectrum { lambda_nm: grid.centers_nm(), per_nm }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_lookup_round_trip() {
        let g = OutputGrid::new(1.4e-6, 1.8e-6, 400).unwrap();
        for k in [0, 17, 399] {
            let (a, b) = g.cell_omega(k);
            assert_eq!(g.cell_of_omega(0.5 * (a + b)), Some(k));
        }
        assert_eq!(g.cell_of_omega(omega_from_wavelength(2.0e-6)), None);
    }

    #[test]
    fn cell_average_integrates_narrow_gaussian() {
        let g = OutputGrid::new(1.4e-6, 1.8e-6, 100).unwrap();
        let c = omega_from_wavelength(1.6e-6);
        let s = 1e10;
        let f = |w: f64| (-((w - c) / s).powi(2)).exp();
        let spec = cell_average(&g, f, (0.0, f64::INFINITY), None, &[Feature { center: c, scale: s / 2.0 }]);
        let exact = s * std::f64::consts::PI.sqrt();
        assert!((spec.total() - exact).abs() < 1e-9 * exact);
    }
}
