use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::seed::{seed_photon_number, SeedSpec};
use super::theta::Seeder;
use crate::constants::omega_from_wavelength;
use crate::error::{Error, Result};

/// One point of a seed-wavelength scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lambda_nm: f64,
    /// Singly seeded flux.
    pub n1_per_s: f64,
    /// Degenerate double-seeded flux (the seed overlapping two modes).
    pub n2_per_s: f64,
}

/// Doubly seeded flux on a grid of seed-wavelength pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleSeedMap {
    pub lambda_nm: Vec<f64>,
    /// Row-major: entry [a * n + b] is seed 1 at `lambda_nm[a]`, seed 2 at `lambda_nm[b]`.
    pub n2_per_s: Vec<f64>,
}

impl DoubleSeedMap {
    pub fn len(&self) -> usize {
        self.lambda_nm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_nm.is_empty()
    }

    pub fn at(&self, a: usize, b: usize) -> f64 {
        self.n2_per_s[a * self.len() + b]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.at(i, i)).collect()
    }
}

impl Seeder {
    /// N1 and degenerate N2 for `template` moved across `lambdas_m`.
    pub fn seed_scan(&self, template: &SeedSpec, lambdas_m: &[f64]) -> Result<Vec<ScanRow>> {
        if lambdas_m.is_empty() {
            return Err(Error::Validation("seed scan needs at least one wavelength".into()));
        }
        let n0 = self.spontaneous().n0_per_s;
        lambdas_m
            .par_iter()
            .map(|&lam| {
                let seed = template.at_omega(omega_from_wavelength(lam));
                let b2 = seed_photon_number(&seed, self.source().pump())?;
                let rate = self.rate_factor(&seed)?;
                let t1 = self.theta_single(&seed, false)?.value;
                let t2 = self.theta_double(&seed, &seed, false)?.value;
                Ok(ScanRow {
                    lambda_nm: lam * 1e9,
                    n1_per_s: 2.0 * n0 * b2 * t1 * rate,
                    n2_per_s: 0.5 * n0 * b2 * b2 * t2 * rate,
                })
            })
            .collect()
    }

    /// (N0/2)|βa|²|βb|² Θ2(a, b) on every pair: the diagonal is the
    /// degenerate curve of [`Seeder::seed_scan`].
    pub fn double_seed_map(&self, template: &SeedSpec, lambdas_m: &[f64]) -> Result<DoubleSeedMap> {
        if lambdas_m.is_empty() {
            return Err(Error::Validation("double-seed map needs at least one wavelength".into()));
        }
        let n = lambdas_m.len();
        let n0 = self.spontaneous().n0_per_s;
        let seeds: Vec<SeedSpec> = lambdas_m.iter().map(|&l| template.at_omega(omega_from_wavelength(l))).collect();
        let b2: Vec<f64> = seeds.iter().map(|s| seed_photon_number(s, self.source().pump())).collect::<Result<_>>()?;
        let rate = self.rate_factor(template)?;
        // Θ2 is symmetric: fill the upper triangle and mirror it
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let vals: Vec<f64> = upper
            .par_iter()
            .map(|&(a, b)| Ok(0.5 * n0 * b2[a] * b2[b] * rate * self.theta_double(&seeds[a], &seeds[b], false)?.value))
            .collect::<Result<_>>()?;
        let mut map = vec![0.0; n * n];
        for (&(a, b), v) in upper.iter().zip(vals) {
            map[a * n + b] = v;
            map[b * n + a] = v;
        }
        Ok(DoubleSeedMap { lambda_nm: lambdas_m.iter().map(|l| l * 1e9).collect(), n2_per_s: map })
    }
}

/// Shape of the level set {v ≥ rel · max} of a square map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetTopology {
    /// 8-connected components of the level set.
    pub components: usize,
    /// Mean (row, column) of the cells in the set.
    pub centroid: (f64, f64),
    /// Whether the cell nearest the centroid belongs to the set.
    pub centroid_inside: bool,
}

impl LevelSetTopology {
    /// A single connected set that goes around its own centroid.
    pub fn is_ring(&self) -> bool {
        self.components == 1 && !self.centroid_inside
    }
}

pub fn level_set_topology(map: &[f64], n: usize, rel: f64) -> Result<LevelSetTopology> {
    if map.len() != n * n || n == 0 {
        return Err(Error::Validation("level-set analysis needs a square map".into()));
    }
    let peak = map.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Numerical("level-set analysis of an all-zero map".into()));
    }
    let inside: Vec<bool> = map.iter().map(|&v| v >= rel * peak).collect();
    let mut label = vec![0usize; n * n];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..n * n {
        if !inside[start] || label[start] != 0 {
            continue;
        }
        components += 1;
        label[start] = components;
        stack.push(start);
        while let Some(c) = stack.pop() {
            let (r, q) = ((c / n) as isize, (c % n) as isize);
            for dr in -1..=1 {
                for dq in -1..=1 {
                    let (rr, qq) = (r + dr, q + dq);
                    if rr < 0 || qq < 0 || rr >= n as isize || qq >= n as isize {
                        continue;
                    }
                    let idx = rr as usize * n + qq as usize;
                    if inside[idx] && label[idx] == 0 {
                        label[idx] = components;
                        stack.push(idx);
                    }
                }
            }
        }
    }
    let cells: Vec<usize> = (0..n * n).filter(|&i| inside[i]).collect();
    let m = cells.len() as f64;
    let cr = cells.iter().map(|&i| (i / n) as f64).sum::<f64>() / m;
    let cq = cells.iter().map(|&i| (i % n) as f64).sum::<f64>() / m;
    let idx = cr.round() as usize * n + cq.round() as usize;
    Ok(LevelSetTopology { components, centroid: (cr, cq), centroid_inside: inside[idx] })
}
