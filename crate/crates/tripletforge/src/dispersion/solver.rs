//! Exact hybrid-mode eigenvalue equation of a step-index cylinder.
//!
//! With u = a k0 sqrt(n1^2 - neff^2) and w = a k0 sqrt(neff^2 - n2^2) the
//! HE branch of the characteristic equation is written in the pole-free form
//!
//!   G(u) = J_{ν-1}(u) - u J_ν(u) [ -(n1^2+n2^2)/(2 n1^2) K' + ν/u^2 - R ] = 0,
//!
//! where K' = K_ν'(w) / (w K_ν(w)) and
//! R^2 = ((n1^2-n2^2)/(2 n1^2))^2 K'^2 + (ν neff/n1)^2 (1/u^2 + 1/w^2)^2.
//! G is continuous on 0 < u < V, so HE_νm is the m-th sign change in u.

use rayon::prelude::*;

use super::curve::{ModeCurve, Provenance};
use super::fiber::FiberSpec;
use super::mode::ModeLabel;
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;

const SCAN_POINTS: usize = 400;
const ROOT_TOL: f64 = 1e-13;
const ANCHOR_STRIDE: usize = 64;

/// Characteristic function of one fiber/mode at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct Characteristic {
    pub nu: u32,
    pub radius: f64,
    pub k0: f64,
    pub n1: f64,
    pub n2: f64,
}

pub fn characteristic(fiber: &FiberSpec, label: ModeLabel, omega: f64) -> Result<Characteristic> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("angular frequency must be positive (got {omega})")));
    }
    Ok(Characteristic {
        nu: label.azimuthal,
        radius: fiber.core_radius_m,
        k0: omega / SPEED_OF_LIGHT,
        n1: fiber.core_index(omega)?,
        n2: fiber.cladding_index,
    })
}

impl Characteristic {
    pub fn v_number(&self) -> f64 {
        self.radius * self.k0 * (self.n1 * self.n1 - self.n2 * self.n2).sqrt()
    }

    pub fn neff_from_u(&self, u: f64) -> f64 {
        let t = u / (self.radius * self.k0);
        (self.n1 * self.n1 - t * t).sqrt()
    }

    pub fn u_from_neff(&self, neff: f64) -> f64 {
        self.radius * self.k0 * (self.n1 * self.n1 - neff * neff).max(0.0).sqrt()
    }

    pub fn w_from_neff(&self, neff: f64) -> f64 {
        self.radius * self.k0 * (neff * neff - self.n2 * self.n2).max(0.0).sqrt()
    }

    /// G(u) together with the magnitude of its two terms, the local scale
    /// against which residuals are judged.
    pub fn eval(&self, u: f64) -> (f64, f64) {
        let nu = self.nu as f64;
        let v = self.v_number();
        let w = (v * v - u * u).max(0.0).sqrt();
        let neff = self.neff_from_u(u);
        let n1s = self.n1 * self.n1;
        let n2s = self.n2 * self.n2;
        let (jm1, _, _, _) = puruspe::besseljy(nu - 1.0, u);
        let (jn, _, _, _) = puruspe::besseljy(nu, u);
        let (_, kn, _, kpn) = puruspe::besselik(nu, w);
        let kp = kpn / (w * kn);
        let inv = 1.0 / (u * u) + 1.0 / (w * w);
        let a = (n1s - n2s) / (2.0 * n1s) * kp;
        let b = nu * neff / self.n1 * inv;
        let r = (a * a + b * b).sqrt();
        let rhs = -(n1s + n2s) / (2.0 * n1s) * kp + nu / (u * u) - r;
        let second = u * jn * rhs;
        (jm1 - second, jm1.abs() + second.abs())
    }

    /// Residual of the characteristic equation at a given effective index.
    pub fn residual(&self, neff: f64) -> (f64, f64) {
        self.eval(self.u_from_neff(neff))
    }

    fn scan_brackets(&self) -> Vec<(f64, f64)> {
        let v = self.v_number();
        let mut out = Vec::new();
        let mut prev_u = v * 0.5 / SCAN_POINTS as f64;
        let mut prev_g = self.eval(prev_u).0;
        for j in 1..SCAN_POINTS {
            let u = v * (j as f64 + 0.5) / SCAN_POINTS as f64;
            let g = self.eval(u).0;
            if prev_g.is_finite() && g.is_finite() && prev_g.signum() != g.signum() {
                out.push((prev_u, u));
            }
            prev_u = u;
            prev_g = g;
        }
        out
    }

    fn refine(&self, lo: f64, hi: f64) -> Result<f64> {
        let u = find_root_bracketed(|u| self.eval(u).0, lo, hi, ROOT_TOL)?;
        let (g, scale) = self.eval(u);
        if g.abs() > 1e-10 * scale.max(1e-300) {
            return Err(Error::Numerical(format!(
                "characteristic residual {g:.3e} exceeds 1e-10 of local scale {scale:.3e} at u = {u:.12e}"
            )));
        }
        Ok(u)
    }

    /// u of the `radial`-th root by a full sign scan, or None below cutoff.
    fn solve_scan(&self, radial: u32) -> Result<Option<f64>> {
        let brackets = self.scan_brackets();
        match brackets.get(radial as usize - 1) {
            Some(&(lo, hi)) => Ok(Some(self.refine(lo, hi)?)),
            None => Ok(None),
        }
    }

    /// Root near a predicted u, by expanding a bracket around the guess.
    fn solve_near(&self, guess: f64, radial: u32) -> Result<Option<f64>> {
        let v = self.v_number();
        let mut half = 1e-4 * v;
        let g0 = self.eval(guess.clamp(1e-9 * v, v * (1.0 - 1e-12))).0;
        for _ in 0..12 {
            let lo = (guess - half).max(1e-9 * v);
            let hi = (guess + half).min(v * (1.0 - 1e-12));
            let (glo, ghi) = (self.eval(lo).0, self.eval(hi).0);
            if glo.signum() != ghi.signum() {
                // a single sign change on each side of the guess would mean two roots
                if (glo.signum() != g0.signum()) && (ghi.signum() != g0.signum()) {
                    break;
                }
                return self.refine(lo, hi).map(Some);
            }
            half *= 2.0;
        }
        self.solve_scan(radial)
    }
}

/// Effective index of `label` at one angular frequency.
pub fn solve_neff(fiber: &FiberSpec, label: ModeLabel, omega: f64) -> Result<f64> {
    let ch = characteristic(fiber, label, omega)?;
    match ch.solve_scan(label.radial)? {
        Some(u) => Ok(ch.neff_from_u(u)),
        None => Err(Error::BelowCutoff { mode: label.to_string(), offending: vec![omega], first: omega }),
    }
}

/// Equally spaced angular-frequency grid.
pub fn uniform_omega_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect()
}

/// Solve `label` on every point of `omegas` and build its mode curve.
///
/// Every 64th point gets a full sign scan; the points in between start
/// from the interpolated anchor solution and only fall back to a scan if
/// no nearby root is found.
pub fn solve_mode(fiber: &FiberSpec, label: ModeLabel, omegas: &[f64]) -> Result<ModeCurve> {
    fiber.validate()?;
    if omegas.len() < 4 {
        return Err(Error::Validation("mode solve needs at least 4 frequencies".into()));
    }
    if omegas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation("frequency grid must be strictly increasing".into()));
    }
    let n = omegas.len();
    let mut anchors: Vec<usize> = (0..n).step_by(ANCHOR_STRIDE).collect();
    if *anchors.last().unwrap() != n - 1 {
        anchors.push(n - 1);
    }
    let chars: Vec<Characteristic> =
        omegas.iter().map(|&w| characteristic(fiber, label, w)).collect::<Result<_>>()?;

    let anchor_u: Vec<Result<Option<f64>>> =
        anchors.par_iter().map(|&i| chars[i].solve_scan(label.radial)).collect();
    let mut u = vec![f64::NAN; n];
    let mut offending = Vec::new();
    for (&i, r) in anchors.iter().zip(anchor_u) {
        match r? {
            Some(x) => u[i] = x,
            None => offending.push(omegas[i]),
        }
    }
    if !offending.is_empty() {
        // locate every offending point precisely for the report
        let all: Vec<Result<Option<f64>>> = chars.par_iter().map(|c| c.solve_scan(label.radial)).collect();
        let mut bad = Vec::new();
        for (i, r) in all.into_iter().enumerate() {
            if r?.is_none() {
                bad.push(omegas[i]);
            }
        }
        return Err(Error::BelowCutoff { mode: label.to_string(), first: bad[0], offending: bad });
    }

    let rest: Vec<(usize, Result<Option<f64>>)> = (0..n)
        .into_par_iter()
        .filter(|i| u[*i].is_nan())
        .map(|i| {
            let k = anchors.partition_point(|&a| a < i);
            let (a0, a1) = (anchors[k - 1], anchors[k]);
            let t = (omegas[i] - omegas[a0]) / (omegas[a1] - omegas[a0]);
            let guess = u[a0] + t * (u[a1] - u[a0]);
            (i, chars[i].solve_near(guess, label.radial))
        })
        .collect();
    for (i, r) in rest {
        match r? {
            Some(x) => u[i] = x,
            None => offending.push(omegas[i]),
        }
    }
    if !offending.is_empty() {
        return Err(Error::BelowCutoff { mode: label.to_string(), first: offending[0], offending });
    }

    let neff: Vec<f64> = chars.iter().zip(&u).map(|(c, &ui)| c.neff_from_u(ui)).collect();
    for (c, &ne) in chars.iter().zip(&neff) {
        if !(ne > c.n2 && ne < c.n1) {
            return Err(Error::Numerical(format!("effective index {ne} escaped ({}, {})", c.n2, c.n1)));
        }
    }
    ModeCurve::new(label, omegas.to_vec(), neff, Provenance::Solved)
}

/// Core radius at which the pump mode at `omega0` and the triplet mode at
/// `omega0/3` share one effective index, i.e. the degenerate triplet is
/// exactly phase matched. Searches within ±10 % of the fiber's radius.
pub fn tune_core_radius(fiber: &FiberSpec, pump: ModeLabel, triplet: ModeLabel, omega0: f64) -> Result<f64> {
    let mismatch = |r: f64| -> Result<f64> {
        let mut f = fiber.clone();
        f.core_radius_m = r;
        Ok(solve_neff(&f, triplet, omega0 / 3.0)? - solve_neff(&f, pump, omega0)?)
    };
    let r0 = fiber.core_radius_m;
    let n = 40;
    let grid: Vec<f64> = (0..=n).map(|i| r0 * (0.9 + 0.2 * i as f64 / n as f64)).collect();
    let vals: Vec<Option<f64>> = grid.iter().map(|&r| mismatch(r).ok()).collect();
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n {
        if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
            if a.signum() != b.signum() {
                let (lo, hi) = (grid[i], grid[i + 1]);
                let dist = ((lo + hi) / 2.0 - r0).abs();
                if best.map_or(true, |(_, d)| dist < d) {
                    best = Some((lo, dist));
                }
            }
        }
    }
    let (lo, _) = best.ok_or_else(|| {
        Error::Numerical("no degenerate phase-matching radius within ±10% of the given core radius".into())
    })?;
    let hi = lo + 0.2 * r0 / n as f64;
    let f = |r: f64| mismatch(r).unwrap_or(f64::NAN);
    find_root_bracketed(f, lo, hi, 1e-12)
}
