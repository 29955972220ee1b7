use serde::{Deserialize, Serialize};

use crate::dispersion::{
    effective_overlap, solve_mode, uniform_omega_grid, FiberSpec, ModeCurve, ModeLabel, OverlapResult,
    DEFAULT_RADIAL_NODES,
};
use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;

/// Triplet curves span ω0/3 · (1 ± this).
pub const TRIPLET_SPAN_FRACTION: f64 = 0.3;
/// Pump curves span ω0 · (1 ± this).
pub const PUMP_SPAN_FRACTION: f64 = 0.01;
const CURVE_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralKind {
    Pulsed,
    Monochromatic,
}

impl std::fmt::Display for SpectralKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpectralKind::Pulsed => "pulsed",
            SpectralKind::Monochromatic => "cw",
        })
    }
}

/// Pump field. `sigma_rad_s` and `rep_rate_hz` are ignored for a CW pump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    pub kind: SpectralKind,
    pub omega0: f64,
    pub sigma_rad_s: f64,
    pub power_w: f64,
    pub rep_rate_hz: f64,
    pub mode: ModeLabel,
}

impl PumpSpec {
    pub fn pulsed(omega0: f64, sigma_rad_s: f64, power_w: f64, rep_rate_hz: f64, mode: ModeLabel) -> Self {
        Self { kind: SpectralKind::Pulsed, omega0, sigma_rad_s, power_w, rep_rate_hz, mode }
    }

    pub fn cw(omega0: f64, power_w: f64, mode: ModeLabel) -> Self {
        Self { kind: SpectralKind::Monochromatic, omega0, sigma_rad_s: 0.0, power_w, rep_rate_hz: 0.0, mode }
    }

    pub fn is_pulsed(&self) -> bool {
        self.kind == SpectralKind::Pulsed
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::Validation(format!("pump frequency must be positive, got {}", self.omega0)));
        }
        if !(self.power_w >= 0.0 && self.power_w.is_finite()) {
            return Err(Error::Validation(format!("pump power must be >= 0, got {}", self.power_w)));
        }
        if self.is_pulsed() {
            if !(self.sigma_rad_s > 0.0) {
                return Err(Error::Validation("pulsed pump needs a positive bandwidth".into()));
            }
            if !(self.rep_rate_hz > 0.0) {
                return Err(Error::Validation("pulsed pump needs a positive repetition rate".into()));
            }
        }
        Ok(())
    }
}

/// Everything needed to set up the source, before any mode solving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub fiber: FiberSpec,
    pub pump: PumpSpec,
    pub triplet_mode: ModeLabel,
    pub chi3_m2_per_v2: f64,
    /// Skip the overlap computation and use this nonlinear coefficient.
    pub gamma_override: Option<f64>,
    /// Triplet integration window in rad/s; derived from phase matching when absent.
    pub window_rad_s: Option<(f64, f64)>,
    pub quadrature: QuadratureSpec,
}

impl SourceConfig {
    pub fn new(fiber: FiberSpec, pump: PumpSpec, triplet_mode: ModeLabel) -> Self {
        Self {
            fiber,
            pump,
            triplet_mode,
            chi3_m2_per_v2: 2.5e-22,
            gamma_override: None,
            window_rad_s: None,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fiber.validate()?;
        self.pump.validate()?;
        self.quadrature.validate()?;
        if !(self.chi3_m2_per_v2 > 0.0) {
            return Err(Error::Validation("chi3 must be positive".into()));
        }
        if let Some(g) = self.gamma_override {
            if !(g > 0.0) {
                return Err(Error::Validation("gamma override must be positive".into()));
            }
        }
        if let Some((lo, hi)) = self.window_rad_s {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::Validation(format!("bad spectral window [{lo}, {hi}] rad/s")));
            }
        }
        Ok(())
    }

    /// Angular-frequency span on which the triplet mode must be known.
    pub fn triplet_span(&self) -> (f64, f64) {
        let c = self.pump.omega0 / 3.0;
        let (mut lo, mut hi) = (c * (1.0 - TRIPLET_SPAN_FRACTION), c * (1.0 + TRIPLET_SPAN_FRACTION));
        if let Some((a, b)) = self.window_rad_s {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    pub fn pump_span(&self) -> (f64, f64) {
        let w = self.pump.omega0;
        (w * (1.0 - PUMP_SPAN_FRACTION), w * (1.0 + PUMP_SPAN_FRACTION))
    }

    pub fn triplet_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.triplet_span();
        uniform_omega_grid(lo, hi, CURVE_POINTS)
    }

    pub fn pump_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.pump_span();
        uniform_omega_grid(lo, hi, CURVE_POINTS)
    }
}

/// A source with its dispersion resolved: immutable and cheap to share.
#[derive(Debug, Clone)]
pub struct Source {
    config: SourceConfig,
    pump_curve: ModeCurve,
    triplet_curve: ModeCurve,
    gamma: f64,
    n0: f64,
    overlap: Option<OverlapResult>,
}

impl Source {
    /// Solve both mode curves and the overlap from scratch.
    pub fn build(config: SourceConfig) -> Result<Self> {
        config.validate()?;
        let pump_curve = solve_mode(&config.fiber, config.pump.mode, &config.pump_grid())?;
        let triplet_curve = solve_mode(&config.fiber, config.triplet_mode, &config.triplet_grid())?;
        Self::with_curves(config, pump_curve, triplet_curve)
    }

    /// Use pre-computed (cached or tabulated) curves; γ is still derived
    /// from the overlap unless the config overrides it.
    pub fn with_curves(config: SourceConfig, pump_curve: ModeCurve, triplet_curve: ModeCurve) -> Result<Self> {
        config.validate()?;
        let omega0 = config.pump.omega0;
        let n0 = pump_curve.n_eff(omega0)?;
        let (gamma, overlap) = match config.gamma_override {
            Some(g) => (g, None),
            None => {
                let o = effective_overlap(
                    &config.fiber,
                    config.pump.mode,
                    config.triplet_mode,
                    omega0,
                    config.chi3_m2_per_v2,
                    DEFAULT_RADIAL_NODES,
                )?;
                // n0 from the curve so cached and solved sources agree bit for bit
                let o = OverlapResult::from_parts(o.f_eff_per_m2, o.chi3_m2_per_v2, omega0, n0, o.triplet_n_eff);
                (o.gamma_per_w_m, Some(o))
            }
        };
        let s = Self { config, pump_curve, triplet_curve, gamma, n0, overlap };
        s.check_spans()?;
        Ok(s)
    }

    fn check_spans(&self) -> Result<()> {
        let omega0 = self.config.pump.omega0;
        let (tlo, thi) = self.triplet_curve.span();
        if !(tlo <= omega0 / 3.0 && omega0 / 3.0 <= thi) {
            return Err(Error::Validation("triplet curve does not cover ω0/3".into()));
        }
        if let Some((a, b)) = self.config.window_rad_s {
            if a < tlo || b > thi {
                return Err(Error::Validation("spectral window exceeds the triplet curve span".into()));
            }
        }
        let (plo, phi) = self.pump_curve.span();
        let reach = if self.config.pump.is_pulsed() {
            crate::jsa::PUMP_CUTOFF_SIGMAS * self.config.pump.sigma_rad_s
        } else {
            0.0
        };
        if omega0 - reach < plo || omega0 + reach > phi {
            return Err(Error::Validation("pump curve is narrower than the pump spectrum".into()));
        }
        Ok(())
    }

    pub fn config(&self) -> &SourceConfig {
        &self.config
    }

    pub fn pump(&self) -> &PumpSpec {
        &self.config.pump
    }

    pub fn omega0(&self) -> f64 {
        self.config.pump.omega0
    }

    pub fn length(&self) -> f64 {
        self.config.fiber.length_m
    }

    pub fn pump_curve(&self) -> &ModeCurve {
        &self.pump_curve
    }

    pub fn triplet_curve(&self) -> &ModeCurve {
        &self.triplet_curve
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Pump effective index at ω0.
    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn overlap(&self) -> Option<&OverlapResult> {
        self.overlap.as_ref()
    }

    /// Copy with a different pump (same fiber and curves). The new pump
    /// must keep ω0 so that the cached dispersion still applies.
    pub fn with_pump(&self, pump: PumpSpec) -> Result<Self> {
        if pump.omega0 != self.config.pump.omega0 || pump.mode != self.config.pump.mode {
            return Err(Error::Validation("with_pump cannot change the pump frequency or mode".into()));
        }
        pump.validate()?;
        let mut s = self.clone();
        s.config.pump = pump;
        s.check_spans()?;
        Ok(s)
    }

    pub fn with_window(&self, window: Option<(f64, f64)>) -> Result<Self> {
        let mut s = self.clone();
        s.config.window_rad_s = window;
        s.config.validate()?;
        s.check_spans()?;
        Ok(s)
    }

    pub fn with_quadrature(&self, q: QuadratureSpec) -> Result<Self> {
        q.validate()?;
        let mut s = self.clone();
        s.config.quadrature = q;
        Ok(s)
    }

    #[inline]
    pub(crate) fn in_triplet_span(&self, w: f64) -> bool {
        self.triplet_curve.contains(w)
    }

    #[inline]
    pub(crate) fn k_triplet(&self, w: f64) -> f64 {
        self.triplet_curve.k_unchecked(w)
    }

    #[inline]
    pub(crate) fn n_triplet(&self, w: f64) -> f64 {
        self.triplet_curve.n_eff_unchecked(w)
    }

    #[inline]
    pub(crate) fn k_pump(&self, w: f64) -> f64 {
        self.pump_curve.k_unchecked(w)
    }

    #[inline]
    pub(crate) fn n_pump(&self, w: f64) -> f64 {
        self.pump_curve.n_eff_unchecked(w)
    }
}
