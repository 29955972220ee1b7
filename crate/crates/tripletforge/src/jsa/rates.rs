use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::grid::resolve_window;
use super::source::{Source, SpectralKind};
use crate::constants::HBAR;
use crate::error::Result;
use crate::numerics::{integrate_nd, Axis, ConvergenceReport};

/// Half-width of the pump-detuning axis, in σp.
const OMEGA_AXIS_SIGMAS: f64 = 5.0;
/// Fixed Gauss-Legendre nodes across the pump-detuning axis.
pub(crate) const OMEGA_AXIS_NODES: usize = 32;

/// Spontaneous triplet generation summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spontaneous {
    pub pump_kind: SpectralKind,
    /// Per pulse for a pulsed pump, per second for a CW pump.
    pub c3_squared: f64,
    /// N0 in triplets per second.
    pub n0_per_s: f64,
    /// The frequency integral without its prefactor.
    pub integral: ConvergenceReport,
}

/// N0 = 3|c|², times R for a pulsed pump.
pub fn n0(c3_squared: f64, pump_kind: SpectralKind, rep_rate_hz: f64) -> f64 {
    match pump_kind {
        SpectralKind::Pulsed => 3.0 * c3_squared * rep_rate_hz,
        SpectralKind::Monochromatic => 3.0 * c3_squared,
    }
}

/// Prefactor of the CW rate: 27 ħ L² n0⁴ P γ² / (8 π² ω0²).
pub(crate) fn cw_prefactor(source: &Source) -> f64 {
    let p = source.pump();
    let l = source.length();
    27.0 * HBAR * l * l * source.n0().powi(4) * p.power_w * source.gamma().powi(2)
        / (8.0 * PI * PI * p.omega0 * p.omega0)
}

/// Prefactor of the per-pulse probability: 27 √2 ħ L² n0⁴ P γ² / (8 π^{5/2} ω0² σp R).
pub(crate) fn pulsed_prefactor(source: &Source) -> f64 {
    let p = source.pump();
    let l = source.length();
    27.0 * 2f64.sqrt() * HBAR * l * l * source.n0().powi(4) * p.power_w * source.gamma().powi(2)
        / (8.0 * PI.powf(2.5) * p.omega0 * p.omega0 * p.sigma_rad_s * p.rep_rate_hz)
}

/// ∫∫ ω1ω2ω3 Ξ² / (n1 n2 n3 n0) dω1 dω2 on the energy plane, all three
/// frequencies inside the window.
pub(crate) fn cw_integral(source: &Source) -> Result<ConvergenceReport> {
    let (lo, hi) = resolve_window(source)?;
    let omega0 = source.omega0();
    let n0 = source.n0();
    let f = |x: &[f64]| {
        let w3 = omega0 - x[0] - x[1];
        if !(lo..=hi).contains(&w3) {
            return 0.0;
        }
        match source.cw_pm(x[0], x[1], w3) {
            Some((xi, _)) => source.spectral_weight(x[0], x[1], w3) * xi * xi / n0,
            None => 0.0,
        }
    };
    integrate_nd(f, &[Axis::new(lo, hi), Axis::new(lo, hi)], &source.config().quadrature)?.require()
}

/// ∫∫∫ ω1ω2ω3 |f|² / (n1 n2 n3 n_p(Σ)) over (ω1, ω2, Σ - ω0).
pub(crate) fn pulsed_integral(source: &Source) -> Result<ConvergenceReport> {
    let (lo, hi) = resolve_window(source)?;
    let omega0 = source.omega0();
    let s = source.pump().sigma_rad_s;
    let f = |x: &[f64]| {
        let sum = omega0 + x[2];
        let w3 = sum - x[0] - x[1];
        if !(lo..=hi).contains(&w3) {
            return 0.0;
        }
        let (amp, _) = source.pulsed_f(x[0], x[1], w3);
        if amp == 0.0 {
            return 0.0;
        }
        source.spectral_weight(x[0], x[1], w3) * amp * amp / source.n_pump(sum)
    };
    let axes = [
        Axis::new(lo, hi),
        Axis::new(lo, hi),
        Axis::fixed(-OMEGA_AXIS_SIGMAS * s, OMEGA_AXIS_SIGMAS * s, OMEGA_AXIS_NODES),
    ];
    integrate_nd(f, &axes, &source.config().quadrature)?.require()
}

fn scaled(mut r: ConvergenceReport, k: f64) -> ConvergenceReport {
    r.value *= k;
    r
}

/// |c|² per second for a CW pump; errors for a pulsed one.
pub fn c3_squared_cw(source: &Source) -> Result<ConvergenceReport> {
    if source.pump().is_pulsed() {
        return Err(crate::Error::Validation("c3_squared_cw needs a monochromatic pump".into()));
    }
    Ok(scaled(cw_integral(source)?, cw_prefactor(source)))
}

/// |c|² per pulse for a pulsed pump; errors for a CW one.
pub fn c3_squared_pulsed(source: &Source) -> Result<ConvergenceReport> {
    if !source.pump().is_pulsed() {
        return Err(crate::Error::Validation("c3_squared_pulsed needs a pulsed pump".into()));
    }
    Ok(scaled(pulsed_integral(source)?, pulsed_prefactor(source)))
}

/// Dispatch on the pump kind and assemble N0.
pub fn c3_squared(source: &Source) -> Result<Spontaneous> {
    let p = source.pump();
    let (integral, pre) = match p.kind {
        SpectralKind::Pulsed => (pulsed_integral(source)?, pulsed_prefactor(source)),
        SpectralKind::Monochromatic => (cw_integral(source)?, cw_prefactor(source)),
    };
    let c3 = integral.value * pre;
    Ok(Spontaneous { pump_kind: p.kind, c3_squared: c3, n0_per_s: n0(c3, p.kind, p.rep_rate_hz), integral })
}
