use super::source::{PumpSpec, Source};
use crate::error::{Error, Result};

/// Pulsed pump envelope is treated as exactly zero beyond this many σp.
pub const PUMP_CUTOFF_SIGMAS: f64 = 8.0;

/// sin(x)/x with a Taylor branch near zero.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Ξ = sinc(L Δk / 2).
#[inline]
pub fn phase_matching(length_m: f64, delta_k: f64) -> f64 {
    sinc(0.5 * length_m * delta_k)
}

/// ξ = exp(-(ω1+ω2+ω3-ω0)²/σp²).
pub fn pump_envelope(pump: &PumpSpec, w1: f64, w2: f64, w3: f64) -> Result<f64> {
    if !pump.is_pulsed() {
        return Err(Error::Validation(
            "pump envelope is only defined for a pulsed pump; CW paths use the energy-conservation limit".into(),
        ));
    }
    let d = (w1 + w2 + w3 - pump.omega0) / pump.sigma_rad_s;
    Ok((-d * d).exp())
}

/// Δk = -k_p(ω1+ω2+ω3) + k(ω1) + k(ω2) + k(ω3), checked against both curve spans.
pub fn delta_k(source: &Source, w1: f64, w2: f64, w3: f64) -> Result<f64> {
    for w in [w1, w2, w3] {
        if !source.in_triplet_span(w) {
            let (a, b) = source.triplet_curve().span();
            return Err(Error::Domain(format!("{w:.6e} rad/s outside the triplet curve span [{a:.6e}, {b:.6e}]")));
        }
    }
    let [a, b, c] = sorted([w1, w2, w3]);
    let sum = a + b + c;
    if !source.pump_curve().contains(sum) {
        let (lo, hi) = source.pump_curve().span();
        return Err(Error::Domain(format!("ω1+ω2+ω3 = {sum:.6e} rad/s outside the pump curve span [{lo:.6e}, {hi:.6e}]")));
    }
    Ok(source.delta_k_sorted(a, b, c, source.k_pump(sum)))
}

#[inline]
pub(crate) fn sorted(mut v: [f64; 3]) -> [f64; 3] {
    if v[0] > v[1] {
        v.swap(0, 1);
    }
    if v[1] > v[2] {
        v.swap(1, 2);
    }
    if v[0] > v[1] {
        v.swap(0, 1);
    }
    v
}

impl Source {
    #[inline]
    pub(crate) fn delta_k_sorted(&self, a: f64, b: f64, c: f64, k_p: f64) -> f64 {
        (self.k_triplet(a) + self.k_triplet(b)) + self.k_triplet(c) - k_p
    }

    /// Phase matching Ξ and Δk for a triplet on the CW energy plane
    /// (ω3 eliminated by the caller), or `None` outside the curve span.
    #[inline]
    pub(crate) fn cw_pm(&self, w1: f64, w2: f64, w3: f64) -> Option<(f64, f64)> {
        if !(self.in_triplet_span(w1) && self.in_triplet_span(w2) && self.in_triplet_span(w3)) {
            return None;
        }
        let [a, b, c] = sorted([w1, w2, w3]);
        let dk = self.delta_k_sorted(a, b, c, self.k_pump(self.omega0()));
        Some((phase_matching(self.length(), dk), dk))
    }

    /// Pulsed-pump amplitude f = ξ Ξ and Δk, zero beyond the envelope cutoff
    /// or outside the curve span.
    #[inline]
    pub(crate) fn pulsed_f(&self, w1: f64, w2: f64, w3: f64) -> (f64, f64) {
        if !(self.in_triplet_span(w1) && self.in_triplet_span(w2) && self.in_triplet_span(w3)) {
            return (0.0, 0.0);
        }
        let [a, b, c] = sorted([w1, w2, w3]);
        let sum = a + b + c;
        let pump = self.pump();
        let d = (sum - pump.omega0) / pump.sigma_rad_s;
        if d.abs() > PUMP_CUTOFF_SIGMAS {
            return (0.0, 0.0);
        }
        let dk = self.delta_k_sorted(a, b, c, self.k_pump(sum));
        ((-d * d).exp() * phase_matching(self.length(), dk), dk)
    }

    /// ω1ω2ω3 / (n1 n2 n3), the slowly varying weight in every rate integral.
    #[inline]
    pub(crate) fn spectral_weight(&self, w1: f64, w2: f64, w3: f64) -> f64 {
        w1 * w2 * w3 / (self.n_triplet(w1) * self.n_triplet(w2) * self.n_triplet(w3))
    }
}
