use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fiber::FiberSpec;
use super::mode::ModeLabel;
use super::solver::{characteristic, solve_neff};
use crate::constants::{EPSILON_0, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::numerics::{composite_rule, pairwise_sum};

const ANGULAR_POINTS: usize = 64;
pub const DEFAULT_RADIAL_NODES: usize = 256;

/// Real transverse field component in polar coordinates.
pub trait TransverseProfile: Sync {
    fn value(&self, r: f64, phi: f64) -> f64;
    /// Radii where the profile has a kink or jump.
    fn breakpoints(&self) -> Vec<f64>;
    /// Radius beyond which the profile is negligible.
    fn outer_radius(&self) -> f64;
}

/// Uniform disk, the textbook sanity case.
#[derive(Debug, Clone, Copy)]
pub struct FlatTop {
    pub radius: f64,
}

impl TransverseProfile for FlatTop {
    fn value(&self, r: f64, _phi: f64) -> f64 {
        if r <= self.radius {
            1.0
        } else {
            0.0
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.radius]
    }
    fn outer_radius(&self) -> f64 {
        self.radius
    }
}

/// x-polarised component of an HE_νm mode, e_x = P(r) cos((ν-1)φ) + Q(r) cos((ν+1)φ).
#[derive(Debug, Clone, Copy)]
pub struct ModeField {
    pub nu: u32,
    pub radius: f64,
    pub u: f64,
    pub w: f64,
    pub beta: f64,
    pub n_eff: f64,
    /// ω μ0 B relative to A = 1.
    b_tilde: f64,
    c_coef: f64,
    d_coef: f64,
    sign: f64,
}

impl ModeField {
    pub fn new(fiber: &FiberSpec, label: ModeLabel, omega: f64) -> Result<Self> {
        let n_eff = solve_neff(fiber, label, omega)?;
        let ch = characteristic(fiber, label, omega)?;
        let (u, w) = (ch.u_from_neff(n_eff), ch.w_from_neff(n_eff));
        let nu = label.azimuthal as f64;
        let beta = n_eff * ch.k0;
        let (ju, _, jpu, _) = puruspe::besseljy(nu, u);
        let (_, kw, _, kpw) = puruspe::besselik(nu, w);
        let denom = jpu / (u * ju) + kpw / (w * kw);
        let b_tilde = -beta * nu * (1.0 / (u * u) + 1.0 / (w * w)) / denom;
        let mut field = Self {
            nu: label.azimuthal,
            radius: fiber.core_radius_m,
            u,
            w,
            beta,
            n_eff,
            b_tilde,
            c_coef: ju / kw,
            d_coef: b_tilde * ju / kw,
            sign: 1.0,
        };
        // sign convention: e_x positive on the axis
        let (p, q) = field.radial_parts(1e-6 * field.radius);
        if p + q < 0.0 {
            field.sign = -1.0;
        }
        Ok(field)
    }

    /// (E_r, E_φ) radial amplitudes; E_r ∝ cos νφ and E_φ ∝ sin νφ.
    pub fn polar_components(&self, r: f64) -> (f64, f64) {
        let nu = self.nu as f64;
        let a = self.radius;
        if r <= a {
            let x = self.u * r / a;
            let (j, _, jp, _) = puruspe::besseljy(nu, x);
            let s = -(a * a) / (self.u * self.u);
            let er = s * (self.beta * (self.u / a) * jp + self.b_tilde * nu / r * j);
            let ep = s * (-(self.beta * nu / r) * j - self.b_tilde * (self.u / a) * jp);
            (er, ep)
        } else {
            let x = self.w * r / a;
            let (_, k, _, kp) = puruspe::besselik(nu, x);
            let s = (a * a) / (self.w * self.w);
            let er = s * (self.beta * self.c_coef * (self.w / a) * kp + self.d_coef * nu / r * k);
            let ep = s * (-(self.beta * nu / r) * self.c_coef * k - self.d_coef * (self.w / a) * kp);
            (er, ep)
        }
    }

    /// (P, Q) with e_x = P cos((ν-1)φ) + Q cos((ν+1)φ).
    pub fn radial_parts(&self, r: f64) -> (f64, f64) {
        let (er, ep) = self.polar_components(r);
        (self.sign * 0.5 * (er - ep), self.sign * 0.5 * (er + ep))
    }
}

impl TransverseProfile for ModeField {
    fn value(&self, r: f64, phi: f64) -> f64 {
        let (p, q) = self.radial_parts(r);
        let nu = self.nu as f64;
        p * ((nu - 1.0) * phi).cos() + q * ((nu + 1.0) * phi).cos()
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![self.radius]
    }
    fn outer_radius(&self) -> f64 {
        // fields decay like exp(-w r / a); 30 decay lengths is far below any tolerance used here
        self.radius * (1.0 + 30.0 / self.w.max(1e-3))
    }
}

/// Polar product-rule nodes (r, φ, weight) covering every profile's support.
fn polar_nodes(profiles: &[&dyn TransverseProfile], radial_nodes: usize) -> Vec<(f64, f64)> {
    let mut breaks: Vec<f64> = profiles.iter().flat_map(|p| p.breakpoints()).collect();
    let outer = profiles.iter().map(|p| p.outer_radius()).fold(0.0, f64::max);
    breaks.push(outer);
    breaks.retain(|&b| b > 0.0 && b <= outer);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * outer);
    let mut out = Vec::new();
    let mut lo = 0.0;
    for &hi in &breaks {
        let rule = composite_rule(lo, hi, radial_nodes.div_ceil(8), 8);
        for (r, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((*r, w * r));
        }
        lo = hi;
    }
    out
}

/// Normalised four-field overlap ∬ u_p u_1 u_2 u_3 dA, each field scaled
/// to unit ∬ u² dA. Angular integration uses a uniform periodic rule,
/// exact for the low-order harmonics that appear here.
pub fn overlap_integral(
    pump: &dyn TransverseProfile,
    triplets: [&dyn TransverseProfile; 3],
    radial_nodes: usize,
) -> Result<f64> {
    let all: [&dyn TransverseProfile; 4] = [pump, triplets[0], triplets[1], triplets[2]];
    let radial = polar_nodes(&all, radial_nodes);
    let dphi = 2.0 * PI / ANGULAR_POINTS as f64;
    let mut norms = [0.0f64; 4];
    let mut products = Vec::with_capacity(radial.len());
    let mut squares: [Vec<f64>; 4] = Default::default();
    for &(r, wr) in &radial {
        let mut prod_ring = Vec::with_capacity(ANGULAR_POINTS);
        let mut sq_ring: [Vec<f64>; 4] = Default::default();
        for j in 0..ANGULAR_POINTS {
            let phi = dphi * j as f64;
            let v: Vec<f64> = all.iter().map(|p| p.value(r, phi)).collect();
            prod_ring.push(v[0] * v[1] * v[2] * v[3]);
            for k in 0..4 {
                sq_ring[k].push(v[k] * v[k]);
            }
        }
        products.push(wr * dphi * pairwise_sum(&prod_ring));
        for k in 0..4 {
            squares[k].push(wr * dphi * pairwise_sum(&sq_ring[k]));
        }
    }
    for k in 0..4 {
        norms[k] = pairwise_sum(&squares[k]);
        if !(norms[k] > 0.0 && norms[k].is_finite()) {
            return Err(Error::Numerical(format!("transverse profile {k} is not normalisable (∬u² = {})", norms[k])));
        }
    }
    let raw = pairwise_sum(&products);
    Ok(raw / (norms[0] * norms[1] * norms[2] * norms[3]).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult {
    /// Four-field overlap in 1/m² (area-normalised profiles).
    pub f_eff_per_m2: f64,
    pub gamma_per_w_m: f64,
    pub chi3_m2_per_v2: f64,
    /// Pump effective index at ω0, used as n0.
    pub n0: f64,
    pub triplet_n_eff: f64,
}

impl OverlapResult {
    /// γ = 3 χ3 ω0 f_eff / (4 ε0 c² n0²).
    pub fn from_parts(f_eff: f64, chi3: f64, omega0: f64, n0: f64, triplet_n_eff: f64) -> Self {
        let gamma = 3.0 * chi3 * omega0 * f_eff / (4.0 * EPSILON_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT * n0 * n0);
        Self { f_eff_per_m2: f_eff, gamma_per_w_m: gamma, chi3_m2_per_v2: chi3, n0, triplet_n_eff }
    }
}

/// Overlap of the pump mode at ω0 with three copies of the triplet mode at ω0/3.
///
/// The overall sign of a mode field is arbitrary, so the pump sign is
/// chosen to make f_eff non-negative.
pub fn effective_overlap(
    fiber: &FiberSpec,
    pump: ModeLabel,
    triplet: ModeLabel,
    omega0: f64,
    chi3: f64,
    radial_nodes: usize,
) -> Result<OverlapResult> {
    let p = ModeField::new(fiber, pump, omega0)?;
    let t = ModeField::new(fiber, triplet, omega0 / 3.0)?;
    let f = overlap_integral(&p, [&t, &t, &t], radial_nodes)?.abs();
    Ok(OverlapResult::from_parts(f, chi3, omega0, p.n_eff, t.n_eff))
}
