use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fidelity::fill_holes;
use crate::constants::{omega_from_wavelength, wavelength_from_omega, HBAR};
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use crate::seeding::{SeedSpec, Seeder};
use std::f64::consts::PI;

/// Optical linewidth of each tomography seed when none is given.
pub const DEFAULT_LINEWIDTH_HZ: f64 = 1e6;
/// Contamination ratios are taken where the cross spectrum exceeds this
/// fraction of its peak over the whole raster.
pub const CONTAMINATION_FLOOR: f64 = 1e-2;

/// Two CW seeds rastered over wavelength grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetScanConfig {
    pub seed_i_lambda_m: Vec<f64>,
    pub seed_j_lambda_m: Vec<f64>,
    pub power_i_w: f64,
    pub power_j_w: f64,
    pub linewidth_hz: f64,
    /// Nodes of the uniform ω1 axis on which spectra are recorded.
    pub output_nodes: usize,
    /// Raster points with |λi - λj| below (skip - ½) raster steps are not
    /// measured: the self term of either seed would land on the signal.
    pub diagonal_skip_cells: usize,
}

impl SetScanConfig {
    /// Square raster of `n` evenly spaced wavelengths for both seeds.
    pub fn square(lambda_lo_m: f64, lambda_hi_m: f64, n: usize, power_w: f64) -> Self {
        let grid: Vec<f64> = if n < 2 {
            vec![lambda_lo_m; n]
        } else {
            (0..n).map(|k| lambda_lo_m + (lambda_hi_m - lambda_lo_m) * k as f64 / (n - 1) as f64).collect()
        };
        Self {
            seed_i_lambda_m: grid.clone(),
            seed_j_lambda_m: grid,
            power_i_w: power_w,
            power_j_w: power_w,
            linewidth_hz: DEFAULT_LINEWIDTH_HZ,
            output_nodes: 1024,
            diagonal_skip_cells: 1,
        }
    }

    /// Raster covering a seeder's phase-matched window.
    pub fn covering(seeder: &Seeder, n: usize, power_w: f64) -> Self {
        let (lo, hi) = seeder.window();
        Self::square(wavelength_from_omega(hi), wavelength_from_omega(lo), n, power_w)
    }

    pub fn with_powers(&self, power_i_w: f64, power_j_w: f64) -> Self {
        Self { power_i_w, power_j_w, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seed_i_lambda_m.len() < 2 || self.seed_j_lambda_m.len() < 2 {
            return Err(Error::Validation("tomography needs at least two wavelengths per seed grid".into()));
        }
        if self.seed_i_lambda_m.iter().chain(&self.seed_j_lambda_m).any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::Validation("seed wavelengths must be positive".into()));
        }
        for g in [&self.seed_i_lambda_m, &self.seed_j_lambda_m] {
            if !g.windows(2).all(|w| w[1] > w[0]) {
                return Err(Error::Validation("seed wavelength grids must be strictly increasing".into()));
            }
        }
        if !(self.power_i_w >= 0.0 && self.power_j_w >= 0.0) {
            return Err(Error::Validation("seed powers must be nonnegative".into()));
        }
        if !(self.linewidth_hz > 0.0) {
            return Err(Error::Validation("seed linewidth must be positive".into()));
        }
        if self.output_nodes < 8 {
            return Err(Error::Validation("output axis needs at least 8 nodes".into()));
        }
        Ok(())
    }

    fn raster_step(&self) -> f64 {
        let step = |g: &[f64]| (g[g.len() - 1] - g[0]) / (g.len() - 1) as f64;
        step(&self.seed_i_lambda_m).max(step(&self.seed_j_lambda_m))
    }

    fn skipped(&self, li: f64, lj: f64) -> bool {
        self.diagonal_skip_cells > 0 && (li - lj).abs() < (self.diagonal_skip_cells as f64 - 0.5) * self.raster_step()
    }
}

/// k-number bandwidth of a seed with optical linewidth δν: 2πδν·dk/dω.
pub fn delta_k(seeder: &Seeder, omega: f64, linewidth_hz: f64) -> Result<f64> {
    Ok(2.0 * PI * linewidth_hz * seeder.source().triplet_curve().dk_domega(omega)?)
}

/// Simulated raster: one doubly seeded spectrum per seed pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetRaster {
    pub config: SetScanConfig,
    pub n0_per_s: f64,
    /// Uniform ω1 axis (rad/s), ascending.
    pub omega1: Vec<f64>,
    /// dk/dω at each ω1 node.
    pub dk_domega1: Vec<f64>,
    pub delta_k_i: Vec<f64>,
    pub delta_k_j: Vec<f64>,
    /// Seed photon fluxes (photons/s).
    pub flux_i: Vec<f64>,
    pub flux_j: Vec<f64>,
    /// Row-major over (i, j); each spectrum is photons/s per unit k1 on
    /// `omega1`. `None` marks a skipped point.
    pub spectra: Vec<Option<Vec<f64>>>,
    /// Smallest ratio of the cross spectrum to the competing single and
    /// self-double spectra, over nodes where the cross spectrum exceeds
    /// [`CONTAMINATION_FLOOR`] of its raster-wide peak.
    pub contamination: Vec<Option<f64>>,
    pub skipped: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl SetRaster {
    pub fn rows(&self) -> usize {
        self.config.seed_i_lambda_m.len()
    }

    pub fn cols(&self) -> usize {
        self.config.seed_j_lambda_m.len()
    }

    pub fn spectrum(&self, i: usize, j: usize) -> Option<&[f64]> {
        self.spectra[i * self.cols() + j].as_deref()
    }

    /// Worst contamination ratio over the raster.
    pub fn worst_contamination(&self) -> Option<f64> {
        self.contamination.iter().flatten().cloned().reduce(f64::min)
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Forward model: N2(k1) = 2 N0 Fi Fj Θ2(ω1)·dω1/dk1 per seed pair, plus
/// the single and self-double spectra of the same seeds for diagnostics.
pub fn simulate_set_scan(seeder: &Seeder, scan: &SetScanConfig) -> Result<SetRaster> {
    scan.validate()?;
    let source = seeder.source();
    if !source.pump().is_pulsed() {
        return Err(Error::Validation(
            "tomography needs a pulsed pump: with a CW pump each seed pair emits a single line".into(),
        ));
    }
    let (lo, hi) = seeder.window();
    let omega1 = uniform(lo, hi, scan.output_nodes);
    let step = omega1[1] - omega1[0];
    let sp = source.pump().sigma_rad_s;
    let mut warnings = Vec::new();
    if step > 0.5 * sp {
        warnings.push(format!(
            "output axis step {step:.3e} rad/s is coarser than half the pump bandwidth; increase output_nodes"
        ));
    }
    let dk1: Vec<f64> = omega1.iter().map(|&w| source.triplet_curve().dk_domega(w)).collect::<Result<_>>()?;
    let n0 = seeder.spontaneous().n0_per_s;
    let scale = seeder.theta_scale();
    let reach = seeder.pump_cutoff();
    let omega0 = source.omega0();

    let seeds_i: Vec<f64> = scan.seed_i_lambda_m.iter().map(|&l| omega_from_wavelength(l)).collect();
    let seeds_j: Vec<f64> = scan.seed_j_lambda_m.iter().map(|&l| omega_from_wavelength(l)).collect();
    let dk_of = |ws: &[f64]| -> Result<Vec<f64>> {
        ws.iter()
            .map(|&w| if source.triplet_curve().contains(w) { delta_k(seeder, w, scan.linewidth_hz) } else { Ok(f64::NAN) })
            .collect()
    };
    let (delta_k_i, delta_k_j) = (dk_of(&seeds_i)?, dk_of(&seeds_j)?);
    let flux = |p: f64, w: f64| p / (HBAR * w);
    let flux_i: Vec<f64> = seeds_i.iter().map(|&w| flux(scan.power_i_w, w)).collect();
    let flux_j: Vec<f64> = seeds_j.iter().map(|&w| flux(scan.power_j_w, w)).collect();

    // competing spectra depend on one seed only: 2N0 F Θ1(ω1) + (N0/2) F² Θ2(ω1; ωs, ωs)
    let competing = |ws: f64, f: f64| -> Vec<f64> {
        let span = seeder.pump_sum_span(ws);
        omega1
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let single = 2.0 * n0 * f * scale * seeder.single_density_pcw(span, w, ws);
                let own = 0.5 * n0 * f * f * scale * seeder.double_density_pcw(w, ws, ws);
                (single + own) / dk1[k]
            })
            .collect()
    };
    let comp_i: Vec<Vec<f64>> = seeds_i.par_iter().zip(&flux_i).map(|(&w, &f)| competing(w, f)).collect();
    let comp_j: Vec<Vec<f64>> = seeds_j.par_iter().zip(&flux_j).map(|(&w, &f)| competing(w, f)).collect();

    let (rows, cols) = (seeds_i.len(), seeds_j.len());
    let points: Vec<Option<Vec<f64>>> = (0..rows * cols)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p / cols, p % cols);
            if scan.skipped(scan.seed_i_lambda_m[a], scan.seed_j_lambda_m[b]) {
                return None;
            }
            let (wi, wj) = (seeds_i[a], seeds_j[b]);
            let centre = omega0 - wi - wj;
            let k = 2.0 * n0 * flux_i[a] * flux_j[b] * scale;
            let mut spec = vec![0.0; omega1.len()];
            // nothing is emitted beyond the pump cutoff around ω0 - ωi - ωj
            let first = ((centre - reach - lo) / step).floor().max(0.0) as usize;
            let last = ((centre + reach - lo) / step).ceil();
            if last >= 0.0 {
                for n in first..=(last as usize).min(omega1.len() - 1) {
                    spec[n] = k * seeder.double_density_pcw(omega1[n], wi, wj) / dk1[n];
                }
            }
            Some(spec)
        })
        .collect();
    let peak = points.iter().flatten().flat_map(|s| s.iter()).cloned().fold(0.0, f64::max);
    let contamination: Vec<Option<f64>> = points
        .iter()
        .enumerate()
        .map(|(p, spec)| {
            let (a, b) = (p / cols, p % cols);
            let ratios: Vec<f64> = spec
                .as_ref()?
                .iter()
                .enumerate()
                .filter(|(_, v)| **v >= CONTAMINATION_FLOOR * peak && peak > 0.0)
                .map(|(n, v)| v / (comp_i[a][n] + comp_j[b][n]))
                .collect();
            ratios.into_iter().reduce(f64::min)
        })
        .collect();
    let skipped: Vec<(usize, usize)> =
        points.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(p, _)| (p / cols, p % cols)).collect();
    if !skipped.is_empty() {
        warnings.push(format!("{} raster points near the diagonal were skipped", skipped.len()));
    }
    Ok(SetRaster {
        config: scan.clone(),
        n0_per_s: n0,
        omega1,
        dk_domega1: dk1,
        delta_k_i,
        delta_k_j,
        flux_i,
        flux_j,
        spectra: points,
        contamination,
        skipped,
        warnings,
    })
}

/// Reconstructed (N0/2)|φ(k1, ki, kj)|² on the raster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetReconstruction {
    pub omega1: Vec<f64>,
    pub lambda_i_nm: Vec<f64>,
    pub lambda_j_nm: Vec<f64>,
    /// Row-major over (i, j, ω1); NaN at skipped raster points.
    pub values: Vec<f64>,
    /// ∫dk1 of `values` at each (i, j); skipped points filled from neighbours.
    pub plane: Vec<f64>,
}

impl SetReconstruction {
    pub fn at(&self, i: usize, j: usize, n: usize) -> f64 {
        self.values[(i * self.lambda_j_nm.len() + j) * self.omega1.len() + n]
    }

    /// Integral over all three k axes, skipped points filled.
    pub fn total(&self, raster: &SetRaster) -> f64 {
        let di = dk_steps(&raster.config.seed_i_lambda_m, &raster.delta_k_i, raster.config.linewidth_hz);
        let dj = dk_steps(&raster.config.seed_j_lambda_m, &raster.delta_k_j, raster.config.linewidth_hz);
        let cols = self.lambda_j_nm.len();
        let terms: Vec<f64> =
            self.plane.iter().enumerate().map(|(p, v)| v * di[p / cols] * dj[p % cols]).collect();
        pairwise_sum(&terms)
    }
}

/// Trapezoid weights in k for a wavelength grid, using k' = δk/(2πδν).
fn dk_steps(lambdas: &[f64], delta_k: &[f64], linewidth_hz: f64) -> Vec<f64> {
    let n = lambdas.len();
    let w: Vec<f64> = lambdas.iter().map(|&l| omega_from_wavelength(l)).collect();
    (0..n)
        .map(|k| {
            let a = if k == 0 { w[0] } else { 0.5 * (w[k - 1] + w[k]) };
            let b = if k + 1 == n { w[n - 1] } else { 0.5 * (w[k] + w[k + 1]) };
            let v = delta_k[k] / (2.0 * PI * linewidth_hz);
            if v.is_finite() {
                (a - b).abs() * v
            } else {
                0.0
            }
        })
        .collect()
}

/// Divide every spectrum by 4|βi|²|βj|²δki δkj, with |β|² = F/(2πδν) the
/// seed photons per unit bandwidth.
pub fn reconstruct_jsi(raster: &SetRaster) -> Result<SetReconstruction> {
    let (rows, cols) = (raster.rows(), raster.cols());
    let nw = raster.omega1.len();
    let bw = 2.0 * PI * raster.config.linewidth_hz;
    let mut values = vec![f64::NAN; rows * cols * nw];
    let mut plane = vec![f64::NAN; rows * cols];
    let step = raster.omega1[1] - raster.omega1[0];
    for a in 0..rows {
        for b in 0..cols {
            let Some(spec) = raster.spectrum(a, b) else { continue };
            let (bi, bj) = (raster.flux_i[a] / bw, raster.flux_j[b] / bw);
            let denom = 4.0 * bi * bj * raster.delta_k_i[a] * raster.delta_k_j[b];
            if spec.iter().all(|v| *v == 0.0) {
                // nothing emitted (outside the band); zero whatever the seeds
                values[(a * cols + b) * nw..][..nw].fill(0.0);
                plane[a * cols + b] = 0.0;
                continue;
            }
            if !(denom > 0.0 && denom.is_finite()) {
                return Err(Error::Validation(format!(
                    "reconstruction undefined at raster point ({a}, {b}): zero seed power or bandwidth"
                )));
            }
            let row = &mut values[(a * cols + b) * nw..][..nw];
            for (n, v) in spec.iter().enumerate() {
                row[n] = v / denom;
            }
            // ∫dk1 = Σ value·dω1·dk/dω
            let terms: Vec<f64> = row.iter().zip(&raster.dk_domega1).map(|(v, d)| v * step * d).collect();
            plane[a * cols + b] = pairwise_sum(&terms);
        }
    }
    fill_holes(&mut plane, rows, cols);
    Ok(SetReconstruction {
        omega1: raster.omega1.clone(),
        lambda_i_nm: raster.config.seed_i_lambda_m.iter().map(|l| l * 1e9).collect(),
        lambda_j_nm: raster.config.seed_j_lambda_m.iter().map(|l| l * 1e9).collect(),
        values,
        plane,
    })
}

/// Ground truth (N0/2)|φ(k1, ki, kj)|² at the raster nodes, from the JSA.
pub fn truth_nodes(seeder: &Seeder, raster: &SetRaster) -> Vec<f64> {
    let scale = seeder.theta_scale();
    let n0 = raster.n0_per_s;
    let bw = 2.0 * PI * raster.config.linewidth_hz;
    let cols = raster.cols();
    let nw = raster.omega1.len();
    (0..raster.rows() * cols * nw)
        .into_par_iter()
        .map(|p| {
            let (ab, n) = (p / nw, p % nw);
            let (a, b) = (ab / cols, ab % cols);
            let wi = omega_from_wavelength(raster.config.seed_i_lambda_m[a]);
            let wj = omega_from_wavelength(raster.config.seed_j_lambda_m[b]);
            let v = |dk: f64| bw / dk;
            0.5 * n0 * scale * seeder.double_density_pcw(raster.omega1[n], wi, wj) / raster.dk_domega1[n]
                * v(raster.delta_k_i[a])
                * v(raster.delta_k_j[b])
        })
        .collect()
}

/// Ground-truth seed-plane marginal ∫dk1 (N0/2)|φ|² = (N0/2)·vi·vj·Θ2(i, j)
/// on an arbitrary wavelength grid.
pub fn truth_plane(seeder: &Seeder, lambda_i_m: &[f64], lambda_j_m: &[f64]) -> Result<Vec<f64>> {
    let n0 = seeder.spontaneous().n0_per_s;
    let curve = seeder.source().triplet_curve();
    let cols = lambda_j_m.len();
    (0..lambda_i_m.len() * cols)
        .into_par_iter()
        .map(|p| {
            let (wi, wj) = (omega_from_wavelength(lambda_i_m[p / cols]), omega_from_wavelength(lambda_j_m[p % cols]));
            if !(curve.contains(wi) && curve.contains(wj)) {
                return Ok(0.0);
            }
            let theta = seeder.theta_double(&SeedSpec::cw(wi, 1.0), &SeedSpec::cw(wj, 1.0), false)?.value;
            Ok(0.5 * n0 * theta / (curve.dk_domega(wi)? * curve.dk_domega(wj)?))
        })
        .collect()
}
