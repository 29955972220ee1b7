use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::output::{cell_average, Feature, OutputGrid, Spectrum};
use super::seed::{SeedEnvelope, SeedSpec};
use crate::error::{Error, Result};
use crate::jsa::{c3_squared, Source, SpectralKind, Spontaneous};
use crate::numerics::{composite_rule, integrate_nd, pairwise_sum, pairwise_sum_complex, Axis, ConvergenceReport, FixedRule};

/// Pulsed pump amplitudes are integrated out to this many σp.
const PUMP_REACH_SIGMAS: f64 = 5.0;
/// Panel width along ω_out + ω_other, in σp: the phase matching varies
/// faster than the pump envelope along this direction.
const SUM_PANEL_SIGMAS: f64 = 0.5;
/// Panels across the overlap of two pulsed seed supports (CW pump).
const PRODUCT_PANELS: usize = 12;
/// Pulsed seed bands excluded from single-seed spectra, in σs.
pub const PULSED_EXCLUSION_SIGMAS: f64 = 3.0;
/// CW seed lines excluded from single-seed spectra, in output cells.
pub const CW_EXCLUSION_CELLS: f64 = 2.0;
/// Output cells used when none are specified.
pub const DEFAULT_OUTPUT_CELLS: usize = 512;

/// An overlap coefficient with its spectral density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theta {
    pub value: f64,
    /// Combined relative error estimate of numerator and normalisation.
    pub rel_error: f64,
    pub numerator: ConvergenceReport,
    pub spectrum: Option<Spectrum>,
    pub warnings: Vec<String>,
}

/// A source prepared for seeded calculations: window, output axis and
/// the spontaneous normalisation are computed once and reused.
#[derive(Debug, Clone)]
pub struct Seeder {
    source: Source,
    window: (f64, f64),
    output: OutputGrid,
    spontaneous: Spontaneous,
}

fn pieces_minus(domain: (f64, f64), bands: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pieces = vec![domain];
    for &(ea, eb) in bands {
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
    pieces
}

/// Cut pieces at interior points so jumps in the integrand sit on panel edges.
fn split_at(pieces: Vec<(f64, f64)>, points: &[f64]) -> Vec<(f64, f64)> {
    pieces
        .into_iter()
        .flat_map(|(a, b)| {
            let mut cuts: Vec<f64> = points.iter().copied().filter(|&p| p > a && p < b).collect();
            cuts.sort_by(f64::total_cmp);
            let mut edges = vec![a];
            edges.extend(cuts);
            edges.push(b);
            edges.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>()
        })
        .collect()
}

fn intersect(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (hi > lo).then_some((lo, hi))
}

/// Fixed rule with at least one 8-point panel per `scale`.
fn scaled_rule(lo: f64, hi: f64, scale: f64) -> FixedRule {
    let panels = (((hi - lo) / scale).ceil() as usize).max(4);
    composite_rule(lo, hi, panels, 8)
}

impl Seeder {
    pub fn new(source: &Source) -> Result<Self> {
        let window = crate::jsa::grid_window(source)?;
        let output = OutputGrid::from_window(window, DEFAULT_OUTPUT_CELLS)?;
        Self::with_output(source, output)
    }

    pub fn with_output(source: &Source, output: OutputGrid) -> Result<Self> {
        let window = crate::jsa::grid_window(source)?;
        let spontaneous = c3_squared(source)?;
        Ok(Self { source: source.clone(), window, output, spontaneous })
    }

    /// Same normalisation, different output axis.
    pub fn rebinned(&self, output: OutputGrid) -> Self {
        Self { output, ..self.clone() }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn output(&self) -> &OutputGrid {
        &self.output
    }

    pub fn spontaneous(&self) -> &Spontaneous {
        &self.spontaneous
    }

    #[inline]
    fn inside(&self, w: f64) -> bool {
        w >= self.window.0 && w <= self.window.1
    }

    /// n0 times the spontaneous integral: every Θ is J over this.
    fn denominator(&self) -> f64 {
        self.source.n0() * self.spontaneous.integral.value
    }

    fn pulsed_amp(&self, w1: f64, w2: f64, w3: f64) -> Complex64 {
        if !(self.inside(w1) && self.inside(w2) && self.inside(w3)) {
            return Complex64::new(0.0, 0.0);
        }
        let (f, dk) = self.source.pulsed_f(w1, w2, w3);
        if f == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(f, 0.5 * self.source.length() * dk)
    }

    fn pulsed_f2(&self, w1: f64, w2: f64, w3: f64) -> f64 {
        if !(self.inside(w1) && self.inside(w2) && self.inside(w3)) {
            return 0.0;
        }
        let (f, _) = self.source.pulsed_f(w1, w2, w3);
        f * f
    }

    fn cw_xi(&self, w1: f64, w2: f64, w3: f64) -> f64 {
        if !(self.inside(w1) && self.inside(w2) && self.inside(w3)) {
            return 0.0;
        }
        self.source.cw_pm(w1, w2, w3).map_or(0.0, |(xi, _)| xi)
    }

    #[inline]
    fn root_weight(&self, w: f64) -> f64 {
        (w / self.source.n_triplet(w)).sqrt()
    }

    fn finish(
        &self,
        density: impl Fn(f64) -> f64 + Sync,
        pieces: &[(f64, f64)],
        exclude: Option<(f64, f64)>,
        features: &[Feature],
        spectrum: bool,
    ) -> Result<Theta> {
        let spec = &self.source.config().quadrature;
        let mut parts = Vec::new();
        for &(a, b) in pieces {
            parts.push(integrate_nd(|x: &[f64]| density(x[0]), &[Axis::new(a, b)], spec)?.require()?);
        }
        let numerator = if parts.is_empty() { ConvergenceReport::exact(0.0) } else { ConvergenceReport::combine(&parts) };
        let den = self.denominator();
        let spectrum = if spectrum {
            let support = pieces.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |s, p| (s.0.min(p.0), s.1.max(p.1)));
            let raw = if pieces.is_empty() {
                Spectrum::zeros(&self.output)
            } else {
                cell_average(&self.output, &density, support, exclude, features)
            };
            Some(raw.scaled(1.0 / den))
        } else {
            None
        };
        let mut warnings = Vec::new();
        if numerator.value == 0.0 {
            warnings.push("seed does not overlap the phase-matched support; overlap is zero".to_string());
        }
        Ok(Theta {
            value: numerator.value / den,
            rel_error: numerator.rel_error + self.spontaneous.integral.rel_error,
            numerator,
            spectrum,
            warnings,
        })
    }

    /// Θ1 for one seed overlapping one generation mode.
    pub fn theta_single(&self, seed: &SeedSpec, spectrum: bool) -> Result<Theta> {
        seed.validate()?;
        match seed.kind {
            SpectralKind::Pulsed => self.theta_single_envelope(&SeedEnvelope::single(seed), spectrum),
            SpectralKind::Monochromatic => self.theta_single_cw(seed.omega, spectrum),
        }
    }

    /// Θ2 for seeds `a` and `b` each overlapping one generation mode
    /// (`a == b` gives the degenerate, self term).
    pub fn theta_double(&self, a: &SeedSpec, b: &SeedSpec, spectrum: bool) -> Result<Theta> {
        a.validate()?;
        b.validate()?;
        // symmetric in its seeds; a fixed order makes swapping them bit-exact
        let (a, b) = if b.omega < a.omega { (b, a) } else { (a, b) };
        match (a.kind, b.kind) {
            (SpectralKind::Pulsed, SpectralKind::Pulsed) => {
                self.theta_double_envelope(&SeedEnvelope::single(a), &SeedEnvelope::single(b), spectrum)
            }
            (SpectralKind::Monochromatic, SpectralKind::Monochromatic) => {
                self.theta_double_cw(a.omega, b.omega, spectrum)
            }
            _ => Err(Error::Validation("double seeding needs two seeds of the same spectral kind".into())),
        }
    }

    pub fn theta_single_envelope(&self, env: &SeedEnvelope, spectrum: bool) -> Result<Theta> {
        let bands: Vec<(f64, f64)> = env
            .supports()
            .iter()
            .map(|&(a, b)| {
                let c = 0.5 * (a + b);
                let h = PULSED_EXCLUSION_SIGMAS * (b - a) / (2.0 * super::seed::SEED_REACH_SIGMAS);
                (c - h, c + h)
            })
            .collect();
        let pieces = pieces_minus(self.window, &bands);
        let exclude = if bands.len() == 1 { Some(bands[0]) } else { None };
        let rules = env.rules();
        let omega0 = self.source.omega0();
        match self.source.pump().kind {
            SpectralKind::Pulsed => {
                let sp = self.source.pump().sigma_rad_s;
                let sup = env.supports();
                let lo = sup.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
                let hi = sup.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
                let srule = scaled_rule(omega0 - hi - PUMP_REACH_SIGMAS * sp, omega0 - lo + PUMP_REACH_SIGMAS * sp, SUM_PANEL_SIGMAS * sp);
                let g = |w_out: f64| -> f64 {
                    let mut acc = Vec::with_capacity(srule.len());
                    for (s, ws) in srule.nodes.iter().zip(&srule.weights) {
                        let w_other = s - w_out;
                        if !self.inside(w_other) {
                            continue;
                        }
                        let mut inner = Vec::new();
                        for r in &rules {
                            for (q, wq) in r.nodes.iter().zip(&r.weights) {
                                let amp = self.pulsed_amp(w_out, w_other, *q);
                                if amp.re != 0.0 || amp.im != 0.0 {
                                    inner.push(amp * env.value(*q).conj() * (wq * self.root_weight(*q)));
                                }
                            }
                        }
                        let inner = pairwise_sum_complex(&inner);
                        acc.push(ws * self.root_weight(w_out).powi(2) * self.root_weight(w_other).powi(2) * inner.norm_sqr());
                    }
                    pairwise_sum(&acc)
                };
                self.finish(g, &pieces, exclude, &[], spectrum)
            }
            SpectralKind::Monochromatic => {
                let g = |w_out: f64| -> f64 {
                    let mut acc = Vec::new();
                    for r in &rules {
                        for (q, wq) in r.nodes.iter().zip(&r.weights) {
                            let w_other = omega0 - w_out - q;
                            let xi = self.cw_xi(w_out, w_other, *q);
                            if xi != 0.0 {
                                acc.push(wq * self.source.spectral_weight(w_out, w_other, *q) * env.value(*q).norm_sqr() * xi * xi);
                            }
                        }
                    }
                    pairwise_sum(&acc)
                };
                self.finish(g, &pieces, exclude, &[], spectrum)
            }
        }
    }

    pub fn theta_double_envelope(&self, a: &SeedEnvelope, b: &SeedEnvelope, spectrum: bool) -> Result<Theta> {
        let omega0 = self.source.omega0();
        let (sa, sb) = (a.supports(), b.supports());
        let lo_a = sa.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        let hi_a = sa.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let lo_b = sb.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
        let hi_b = sb.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        let sigma_s = a.max_sigma().max(b.max_sigma());
        match self.source.pump().kind {
            SpectralKind::Pulsed => {
                let sp = self.source.pump().sigma_rad_s;
                let reach = PUMP_REACH_SIGMAS * sp;
                let domain = (omega0 - hi_a - hi_b - reach, omega0 - lo_a - lo_b + reach);
                let pieces: Vec<(f64, f64)> = intersect(domain, self.window).into_iter().collect();
                let (ra, rb) = (a.rules(), b.rules());
                let g = |w1: f64| -> f64 {
                    let mut inner = Vec::new();
                    for r2 in &ra {
                        for (x2, w2) in r2.nodes.iter().zip(&r2.weights) {
                            let e2 = a.value(*x2).conj() * (w2 * self.root_weight(*x2));
                            for r3 in &rb {
                                for (x3, w3) in r3.nodes.iter().zip(&r3.weights) {
                                    let amp = self.pulsed_amp(w1, *x2, *x3);
                                    if amp.re != 0.0 || amp.im != 0.0 {
                                        inner.push(amp * e2 * b.value(*x3).conj() * (w3 * self.root_weight(*x3)));
                                    }
                                }
                            }
                        }
                    }
                    self.root_weight(w1).powi(2) * pairwise_sum_complex(&inner).norm_sqr()
                };
                let features: Vec<Feature> =
                    pieces.iter().map(|p| Feature { center: 0.5 * (p.0 + p.1), scale: 0.5 * sp }).collect();
                self.finish(g, &pieces, None, &features, spectrum)
            }
            SpectralKind::Monochromatic => {
                let domain = (omega0 - hi_a - hi_b, omega0 - lo_a - lo_b);
                let pieces: Vec<(f64, f64)> = intersect(domain, self.window).into_iter().collect();
                let g = |w1: f64| -> f64 {
                    let mut inner = Vec::new();
                    for &pb in &sb {
                        for &pa in &sa {
                            // ω3 in B's support and ω2 = ω0 - ω1 - ω3 in A's
                            let Some((x, y)) = intersect(pb, (omega0 - w1 - pa.1, omega0 - w1 - pa.0)) else {
                                continue;
                            };
                            let rule = composite_rule(x, y, PRODUCT_PANELS, 8);
                            for (x3, w3) in rule.nodes.iter().zip(&rule.weights) {
                                let x2 = omega0 - w1 - x3;
                                let xi = self.cw_xi(w1, x2, *x3);
                                if xi != 0.0 {
                                    let root = self.source.spectral_weight(w1, x2, *x3).sqrt();
                                    inner.push(a.value(x2) * b.value(*x3) * (w3 * root * xi));
                                }
                            }
                        }
                    }
                    pairwise_sum_complex(&inner).norm_sqr()
                };
                let features: Vec<Feature> =
                    pieces.iter().map(|p| Feature { center: 0.5 * (p.0 + p.1), scale: 0.5 * sigma_s }).collect();
                self.finish(g, &pieces, None, &features, spectrum)
            }
        }
    }

    /// Span of ω_out + ω_other reached by a pulsed pump and a CW seed at `ws`.
    pub(crate) fn pump_sum_span(&self, ws: f64) -> (f64, f64) {
        let omega0 = self.source.omega0();
        let reach = PUMP_REACH_SIGMAS * self.source.pump().sigma_rad_s;
        (omega0 - ws - reach, omega0 - ws + reach)
    }

    /// Un-normalised single-seed density at ω_out (pulsed pump, CW seed).
    pub(crate) fn single_density_pcw(&self, span: (f64, f64), w_out: f64, ws: f64) -> f64 {
        // ω_other = sum - ω_out must stay in the window; clip so the edge is not inside a panel
        let Some((lo, hi)) = intersect(span, (w_out + self.window.0, w_out + self.window.1)) else {
            return 0.0;
        };
        let rule = scaled_rule(lo, hi, SUM_PANEL_SIGMAS * self.source.pump().sigma_rad_s);
        let acc: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(s, wt)| {
                let w_other = s - w_out;
                let f2 = self.pulsed_f2(w_out, w_other, ws);
                if f2 == 0.0 {
                    0.0
                } else {
                    wt * self.source.spectral_weight(w_out, w_other, ws) * f2
                }
            })
            .collect();
        pairwise_sum(&acc)
    }

    /// Un-normalised double-seed density at ω1 (pulsed pump, CW seeds).
    pub(crate) fn double_density_pcw(&self, w1: f64, wa: f64, wb: f64) -> f64 {
        let f2 = self.pulsed_f2(w1, wa, wb);
        if f2 == 0.0 {
            0.0
        } else {
            self.source.spectral_weight(w1, wa, wb) * f2
        }
    }

    /// Θ densities are the raw densities over this.
    pub(crate) fn theta_scale(&self) -> f64 {
        1.0 / self.denominator()
    }

    /// Pulsed amplitudes are exactly zero beyond this distance from ω0 in ω1 + ω2 + ω3.
    pub(crate) fn pump_cutoff(&self) -> f64 {
        crate::jsa::PUMP_CUTOFF_SIGMAS * self.source.pump().sigma_rad_s
    }

    fn theta_single_cw(&self, ws: f64, spectrum: bool) -> Result<Theta> {
        let omega0 = self.source.omega0();
        let h = self.output.omega_halfwidth_cells(ws, CW_EXCLUSION_CELLS);
        let band = (ws - h, ws + h);
        let pieces = pieces_minus(self.window, &[band]);
        match self.source.pump().kind {
            SpectralKind::Pulsed => {
                let span = self.pump_sum_span(ws);
                self.finish(|w_out| self.single_density_pcw(span, w_out, ws), &pieces, Some(band), &[], spectrum)
            }
            SpectralKind::Monochromatic => {
                // ω3 leaves the window at these ω1
                let pieces = split_at(pieces, &[omega0 - ws - self.window.1, omega0 - ws - self.window.0]);
                let g = |w1: f64| -> f64 {
                    let w3 = omega0 - w1 - ws;
                    let xi = self.cw_xi(w1, w3, ws);
                    if xi == 0.0 {
                        0.0
                    } else {
                        self.source.spectral_weight(w1, w3, ws) * xi * xi
                    }
                };
                self.finish(g, &pieces, Some(band), &[], spectrum)
            }
        }
    }

    fn theta_double_cw(&self, wa: f64, wb: f64, spectrum: bool) -> Result<Theta> {
        let omega0 = self.source.omega0();
        let w1 = omega0 - wa - wb;
        match self.source.pump().kind {
            SpectralKind::Pulsed => {
                let sp = self.source.pump().sigma_rad_s;
                let reach = PUMP_REACH_SIGMAS * sp;
                let pieces: Vec<(f64, f64)> = intersect((w1 - reach, w1 + reach), self.window).into_iter().collect();
                self.finish(|x| self.double_density_pcw(x, wa, wb), &pieces, None, &[Feature { center: w1, scale: 0.25 * sp }], spectrum)
            }
            SpectralKind::Monochromatic => {
                // energy conservation fixes ω1; the spectrum is a single line
                let xi = self.cw_xi(w1, wa, wb);
                let j = if xi == 0.0 { 0.0 } else { self.source.spectral_weight(w1, wa, wb) * xi * xi };
                let den = self.denominator();
                let spectrum = spectrum.then(|| {
                    let mut s = Spectrum::zeros(&self.output);
                    if let Some(k) = self.output.cell_of_omega(w1) {
                        s.per_nm[k] = j / den / (self.output.cell_width_m() * 1e9);
                    }
                    s
                });
                let mut warnings = vec!["CW-CW double seeding: ω1 fixed by energy conservation at ω0 - ωa - ωb".to_string()];
                if j == 0.0 {
                    warnings.push("seed pair does not overlap the phase-matched support; overlap is zero".to_string());
                }
                Ok(Theta {
                    value: j / den,
                    rel_error: self.spontaneous.integral.rel_error,
                    numerator: ConvergenceReport::exact(j),
                    spectrum,
                    warnings,
                })
            }
        }
    }
}
