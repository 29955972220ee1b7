use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{default_window, FrequencyGrid};
use super::source::{Source, SpectralKind};
use crate::constants::wavelength_from_omega;
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

/// Relative |f|² level that the grid edges must stay below.
pub const JSA_SUPPORT_THRESHOLD: f64 = 1e-4;

/// f(ω1, ω2, ω3) or the normalised φ on a cubic grid, ω1-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    pub grid: FrequencyGrid,
    pub pump_kind: SpectralKind,
    pub normalized: bool,
    /// √(Σ|f|² Δω³) of the raw amplitude; the normalised values are f divided by it.
    pub norm: f64,
    pub values: Vec<Complex64>,
}

/// 2-D and 1-D marginals of |φ|².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    /// Σ over the dropped axis × Δω; index [a * n + b] with a < b the kept axes.
    pub plane_12: Vec<f64>,
    pub plane_13: Vec<f64>,
    pub plane_23: Vec<f64>,
    pub axis_1: Vec<f64>,
    pub axis_2: Vec<f64>,
    pub axis_3: Vec<f64>,
}

/// Fill the joint amplitude, f·exp(i L Δk / 2), on `grid`.
///
/// For a CW pump only nodes on the energy plane are populated. Every value
/// is computed from the sorted frequency triple, so the array is exactly
/// symmetric under axis permutations.
pub fn joint_amplitude(source: &Source, grid: &FrequencyGrid, normalized: bool) -> Result<JointAmplitude> {
    let n = grid.count;
    let half_l = 0.5 * source.length();
    let pump = source.pump();
    let slabs: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut slab = vec![Complex64::new(0.0, 0.0); n * n];
            let w1 = grid.omega(i);
            for j in 0..n {
                let w2 = grid.omega(j);
                match pump.kind {
                    SpectralKind::Monochromatic => {
                        let m = grid.plane_index;
                        if i + j > m || m - i - j >= n {
                            continue;
                        }
                        let k = m - i - j;
                        if let Some((xi, dk)) = source.cw_pm(w1, w2, grid.omega(k)) {
                            slab[j * n + k] = Complex64::from_polar(1.0, half_l * dk) * xi;
                        }
                    }
                    SpectralKind::Pulsed => {
                        for k in 0..n {
                            let (f, dk) = source.pulsed_f(w1, w2, grid.omega(k));
                            if f != 0.0 {
                                slab[j * n + k] = Complex64::from_polar(1.0, half_l * dk) * f;
                            }
                        }
                    }
                }
            }
            slab
        })
        .collect();
    let values: Vec<Complex64> = slabs.into_iter().flatten().collect();

    let intensity: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    let suggest = || -> Error {
        match default_window(source) {
            Ok((lo, hi)) => Error::Window {
                suggested_nm: (wavelength_from_omega(hi) * 1e9, wavelength_from_omega(lo) * 1e9),
            },
            Err(e) => e,
        }
    };
    if peak == 0.0 {
        return Err(suggest());
    }
    let edge = |i: usize| i == 0 || i + 1 == n;
    let edge_peak = (0..n * n * n)
        .filter(|&idx| edge(idx / (n * n)) || edge((idx / n) % n) || edge(idx % n))
        .map(|idx| intensity[idx])
        .fold(0.0, f64::max);
    if edge_peak > JSA_SUPPORT_THRESHOLD * peak {
        return Err(suggest());
    }

    let dw3 = grid.step.powi(3);
    let norm = (pairwise_sum(&intensity) * dw3).sqrt();
    let values = if normalized { values.into_iter().map(|v| v / norm).collect() } else { values };
    Ok(JointAmplitude { grid: *grid, pump_kind: pump.kind, normalized, norm, values })
}

impl JointAmplitude {
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.grid.count;
        (i * n + j) * n + k
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.values[self.index(i, j, k)]
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Σ|values|² Δω³ (1 for the normalised flavour).
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.intensity()) * self.grid.step.powi(3)
    }

    /// Grid indices of the largest |f|²; the first one in storage order wins ties.
    pub fn argmax(&self) -> (usize, usize, usize) {
        let n = self.grid.count;
        let mut best = (0usize, f64::NEG_INFINITY);
        for (idx, v) in self.values.iter().enumerate() {
            let p = v.norm_sqr();
            if p > best.1 {
                best = (idx, p);
            }
        }
        (best.0 / (n * n), (best.0 / n) % n, best.0 % n)
    }

    pub fn marginals(&self) -> Marginals {
        let n = self.grid.count;
        let dw = self.grid.step;
        let p = self.intensity();
        let mut plane_12 = vec![0.0; n * n];
        let mut plane_13 = vec![0.0; n * n];
        let mut plane_23 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let row = &p[(i * n + j) * n..(i * n + j + 1) * n];
                plane_12[i * n + j] = pairwise_sum(row) * dw;
            }
        }
        let mut buf = vec![0.0; n];
        for a in 0..n {
            for b in 0..n {
                for (t, x) in buf.iter_mut().enumerate() {
                    *x = p[(a * n + t) * n + b];
                }
                plane_13[a * n + b] = pairwise_sum(&buf) * dw;
                for (t, x) in buf.iter_mut().enumerate() {
                    *x = p[(t * n + a) * n + b];
                }
                plane_23[a * n + b] = pairwise_sum(&buf) * dw;
            }
        }
        let collapse_rows = |m: &[f64]| -> Vec<f64> { (0..n).map(|a| pairwise_sum(&m[a * n..(a + 1) * n]) * dw).collect() };
        let collapse_cols = |m: &[f64]| -> Vec<f64> {
            (0..n).map(|b| pairwise_sum(&(0..n).map(|a| m[a * n + b]).collect::<Vec<_>>()) * dw).collect()
        };
        let axis_1 = collapse_rows(&plane_12);
        let axis_2 = collapse_cols(&plane_12);
        let axis_3 = collapse_cols(&plane_13);
        Marginals { plane_12, plane_13, plane_23, axis_1, axis_2, axis_3 }
    }
}

impl Marginals {
    /// The ω1 marginal has a peak on each side of node `center` (normally
    /// ω0/3), both at least 1.5 times the value at the center itself.
    pub fn two_lobed(&self, center: usize) -> bool {
        let p = &self.axis_1;
        if center == 0 || center + 1 >= p.len() {
            return false;
        }
        let left = p[..center].iter().cloned().fold(0.0, f64::max);
        let right = p[center + 1..].iter().cloned().fold(0.0, f64::max);
        left.min(right) >= 1.5 * p[center]
    }
}
