//! Brute-force midpoint-rule oracles for every rate and overlap integral.
//!
//! Each oracle is written from the physical definition using only public
//! curve data, evaluated at n and 2n points per axis. For a rule of order
//! p ≥ 1 the error left at 2n is at most |R(2n) - R(n)| / (2^p - 1), so the
//! library value must sit within that step-law bound of R(2n), widened by
//! its own reported error.

#![allow(dead_code)]

use num_complex::Complex64;
use tripletforge::io::RunConfig;
use tripletforge::jsa::{grid_window, sinc, PUMP_CUTOFF_SIGMAS, Source, SpectralKind};
use tripletforge::numerics::ConvergenceReport;
use tripletforge::seeding::{SeedSpec, Seeder, CW_EXCLUSION_CELLS, PULSED_EXCLUSION_SIGMAS, SEED_REACH_SIGMAS};

struct Physics<'a> {
    src: &'a Source,
    win: (f64, f64),
}

impl<'a> Physics<'a> {
    fn new(src: &'a Source) -> Self {
        Self { src, win: grid_window(src).unwrap() }
    }
    fn inside(&self, w: f64) -> bool {
        w >= self.win.0 && w <= self.win.1
    }
    fn root(&self, w: f64) -> f64 {
        (w / self.src.triplet_curve().n_eff(w).unwrap()).sqrt()
    }
    fn weight(&self, a: f64, b: f64, c: f64) -> f64 {
        (self.root(a) * self.root(b) * self.root(c)).powi(2)
    }
    fn dk(&self, a: f64, b: f64, c: f64, pump_omega: f64) -> f64 {
        let t = self.src.triplet_curve();
        t.k(a).unwrap() + t.k(b).unwrap() + t.k(c).unwrap() - self.src.pump_curve().k(pump_omega).unwrap()
    }
    /// CW phase matching, zero outside the window.
    fn xi(&self, a: f64, b: f64, c: f64) -> f64 {
        if !(self.inside(a) && self.inside(b) && self.inside(c)) {
            return 0.0;
        }
        sinc(0.5 * self.src.length() * self.dk(a, b, c, self.src.omega0()))
    }
    /// Pulsed amplitude with its propagation phase.
    fn amp(&self, a: f64, b: f64, c: f64) -> Complex64 {
        if !(self.inside(a) && self.inside(b) && self.inside(c)) {
            return Complex64::new(0.0, 0.0);
        }
        let p = self.src.pump();
        let s = a + b + c;
        let d = (s - p.omega0) / p.sigma_rad_s;
        if d.abs() > PUMP_CUTOFF_SIGMAS {
            return Complex64::new(0.0, 0.0);
        }
        let dk = self.dk(a, b, c, s);
        Complex64::from_polar((-d * d).exp() * sinc(0.5 * self.src.length() * dk), 0.5 * self.src.length() * dk)
    }
}

fn mid(a: f64, b: f64, n: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = (b - a) / n as f64;
    (0..n).map(move |k| (a + (k as f64 + 0.5) * h, h))
}

fn mid_pieces(pieces: &[(f64, f64)], n: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let total: f64 = pieces.iter().map(|p| p.1 - p.0).sum();
    pieces
        .iter()
        .map(|&(a, b)| {
            let m = ((n as f64 * (b - a) / total).ceil() as usize).max(2);
            mid(a, b, m).map(|(x, h)| h * f(x)).sum::<f64>()
        })
        .sum()
}

fn minus_band(win: (f64, f64), c: f64, h: f64) -> Vec<(f64, f64)> {
    [(win.0, (c - h).min(win.1)), ((c + h).max(win.0), win.1)].into_iter().filter(|p| p.1 > p.0).collect()
}

/// One library integral against its oracle.
#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub label: String,
    pub library: f64,
    pub oracle: f64,
    pub bound: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.oracle > 0.0 && (self.library - self.oracle).abs() <= self.bound
    }
    pub fn rel_diff(&self) -> f64 {
        (self.library - self.oracle).abs() / self.oracle
    }
}

fn check(label: &str, got: &ConvergenceReport, oracle: impl Fn(usize) -> f64, n: usize) -> OracleCheck {
    let coarse = oracle(n);
    let fine = oracle(2 * n);
    let bound = (fine - coarse).abs() + 2.0 * got.rel_error * got.value.abs() + 1e-12 * fine.abs();
    OracleCheck { label: label.to_string(), library: got.value, oracle: fine, bound }
}

/// Closed-form values; only round-off separates the two sides.
fn point(label: &str, got: &ConvergenceReport, oracle: f64) -> OracleCheck {
    OracleCheck { label: label.to_string(), library: got.value, oracle, bound: 1e-9 * oracle.abs() }
}

fn fixture(preset: &str, kind: SpectralKind) -> Source {
    let cfg = RunConfig::preset(preset).unwrap();
    Source::build(cfg.source_config(Some(kind), None).unwrap()).unwrap()
}

fn spontaneous_cw(p: &Physics, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let np = p.src.pump_curve().n_eff(w0).unwrap();
    let (lo, hi) = p.win;
    mid(lo, hi, n)
        .map(|(a, ha)| {
            ha * mid(lo, hi, n)
                .map(|(b, hb)| {
                    let c = w0 - a - b;
                    let x = p.xi(a, b, c);
                    if x == 0.0 {
                        0.0
                    } else {
                        hb * p.weight(a, b, c) * x * x / np
                    }
                })
                .sum::<f64>()
        })
        .sum()
}

fn spontaneous_pulsed(p: &Physics, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let s = p.src.pump().sigma_rad_s;
    let (lo, hi) = p.win;
    let ns = (n / 8).max(8);
    mid(-6.0 * s, 6.0 * s, ns)
        .map(|(d, hd)| {
            let sum = w0 + d;
            let np = p.src.pump_curve().n_eff(sum).unwrap();
            hd * mid(lo, hi, n)
                .map(|(a, ha)| {
                    ha * mid(lo, hi, n)
                        .map(|(b, hb)| {
                            let f = p.amp(a, b, sum - a - b).norm_sqr();
                            if f == 0.0 {
                                0.0
                            } else {
                                hb * p.weight(a, b, sum - a - b) * f / np
                            }
                        })
                        .sum::<f64>()
                })
                .sum::<f64>()
        })
        .sum()
}

fn seed_support(seed: &SeedSpec) -> (f64, f64) {
    let r = SEED_REACH_SIGMAS * seed.sigma_rad_s;
    (seed.omega - r, seed.omega + r)
}

fn cw_pump_cw_seed(p: &Physics, seeder: &Seeder, ws: f64, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let h = seeder.output().omega_halfwidth_cells(ws, CW_EXCLUSION_CELLS);
    mid_pieces(&minus_band(p.win, ws, h), n, |a| {
        let x = p.xi(a, w0 - a - ws, ws);
        p.weight(a, w0 - a - ws, ws) * x * x
    })
}

fn cw_pump_pulsed_seed(p: &Physics, seed: &SeedSpec, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let (qa, qb) = seed_support(seed);
    let band = PULSED_EXCLUSION_SIGMAS * seed.sigma_rad_s;
    mid_pieces(&minus_band(p.win, seed.omega, band), n, |a| {
        mid(qa, qb, n / 4)
            .map(|(q, hq)| {
                let x = p.xi(a, w0 - a - q, q);
                hq * p.weight(a, w0 - a - q, q) * seed.envelope(q).norm_sqr() * x * x
            })
            .sum::<f64>()
    })
}

fn pulsed_pump_cw_seed(p: &Physics, seeder: &Seeder, ws: f64, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let s = p.src.pump().sigma_rad_s;
    let h = seeder.output().omega_halfwidth_cells(ws, CW_EXCLUSION_CELLS);
    mid_pieces(&minus_band(p.win, ws, h), n, |a| {
        mid(w0 - ws - 6.0 * s, w0 - ws + 6.0 * s, n / 8)
            .map(|(sum, hs)| {
                let b = sum - a;
                hs * p.weight(a, b, ws) * p.amp(a, b, ws).norm_sqr()
            })
            .sum::<f64>()
    })
}

/// Energy conservation fixes ω1, so this one is a point value.
fn cw_pump_two_cw_seeds(p: &Physics, wa: f64, wb: f64) -> f64 {
    let w1 = p.src.omega0() - wa - wb;
    let x = p.xi(w1, wa, wb);
    p.weight(w1, wa, wb) * x * x
}

fn pulsed_pump_two_cw_seeds(p: &Physics, wa: f64, wb: f64, n: usize) -> f64 {
    mid_pieces(&[p.win], n, |a| p.weight(a, wa, wb) * p.amp(a, wa, wb).norm_sqr())
}

fn pulsed_pump_pulsed_seed(p: &Physics, seed: &SeedSpec, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let s = p.src.pump().sigma_rad_s;
    let (qa, qb) = seed_support(seed);
    let band = PULSED_EXCLUSION_SIGMAS * seed.sigma_rad_s;
    let nq = (n / 8).max(8);
    mid_pieces(&minus_band(p.win, seed.omega, band), n, |a| {
        mid(w0 - qb - 6.0 * s, w0 - qa + 6.0 * s, nq)
            .map(|(sum, hs)| {
                let b = sum - a;
                let inner: Complex64 = mid(qa, qb, nq)
                    .map(|(q, hq)| p.amp(a, b, q) * seed.envelope(q).conj() * (hq * p.root(q)))
                    .sum();
                hs * (p.root(a) * p.root(b)).powi(2) * inner.norm_sqr()
            })
            .sum::<f64>()
    })
}

fn cw_pump_two_pulsed_seeds(p: &Physics, a: &SeedSpec, b: &SeedSpec, n: usize) -> f64 {
    let w0 = p.src.omega0();
    let (xa, xb) = seed_support(b);
    let (ya, yb) = seed_support(a);
    let nq = (n / 8).max(8);
    // ω1 = ω0 - ω2 - ω3 is confined by the two seed supports
    let support = (w0 - yb - xb, w0 - ya - xa);
    mid_pieces(&[support], n, |w1| {
        let inner: Complex64 = mid(xa, xb, nq)
            .map(|(x3, h)| {
                let x2 = w0 - w1 - x3;
                let x = p.xi(w1, x2, x3);
                a.envelope(x2) * b.envelope(x3) * (h * p.weight(w1, x2, x3).sqrt() * x)
            })
            .sum();
        inner.norm_sqr()
    })
}

fn pulsed_pump_two_pulsed_seeds(p: &Physics, a: &SeedSpec, b: &SeedSpec, n: usize) -> f64 {
    let (aa, ab) = seed_support(a);
    let (ba, bb) = seed_support(b);
    let nq = (n / 8).max(8);
    let reach = 6.0 * p.src.pump().sigma_rad_s;
    let w0 = p.src.omega0();
    mid_pieces(&[(w0 - ab - bb - reach, w0 - aa - ba + reach)], n, |w1| {
        let inner: Complex64 = mid(aa, ab, nq)
            .map(|(x2, h2)| {
                let e2 = a.envelope(x2).conj() * (h2 * p.root(x2));
                mid(ba, bb, nq).map(|(x3, h3)| p.amp(w1, x2, x3) * e2 * b.envelope(x3).conj() * (h3 * p.root(x3))).sum::<Complex64>()
            })
            .sum();
        p.root(w1).powi(2) * inner.norm_sqr()
    })
}

pub fn degenerate_cw_pump() -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let src = fixture("degenerate", SpectralKind::Monochromatic);
    let p = Physics::new(&src);
    let seeder = Seeder::new(&src).unwrap();
    out.push(check("spontaneous", &seeder.spontaneous().integral, |n| spontaneous_cw(&p, n), 400));

    let ws = src.omega0() / 3.0 * 1.01;
    let t1 = seeder.theta_single(&SeedSpec::cw(ws, 1e-3), false).unwrap();
    out.push(check("single, CW seed", &t1.numerator, |n| cw_pump_cw_seed(&p, &seeder, ws, n), 4000));
    let (wa, wb) = (ws, src.omega0() / 3.0 * 0.985);
    let t2 = seeder.theta_double(&SeedSpec::cw(wa, 1e-3), &SeedSpec::cw(wb, 1e-3), false).unwrap();
    out.push(point("double, CW seeds", &t2.numerator, cw_pump_two_cw_seeds(&p, wa, wb)));

    let seed = SeedSpec::pulsed(ws, 7.48e10, 1e-3);
    let t1 = seeder.theta_single(&seed, false).unwrap();
    out.push(check("single, pulsed seed", &t1.numerator, |n| cw_pump_pulsed_seed(&p, &seed, n), 800));

    let other = seed.at_omega(src.omega0() / 3.0 * 0.99);
    let t2 = seeder.theta_double(&seed, &other, false).unwrap();
    out.push(check("double, pulsed seeds", &t2.numerator, |n| cw_pump_two_pulsed_seeds(&p, &seed, &other, n), 800));
    out
}

pub fn nondegenerate_cw_pump() -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let src = fixture("nondegenerate", SpectralKind::Monochromatic);
    let p = Physics::new(&src);
    let seeder = Seeder::new(&src).unwrap();
    out.push(check("spontaneous", &seeder.spontaneous().integral, |n| spontaneous_cw(&p, n), 400));

    let ws = tripletforge::constants::omega_from_wavelength(1521e-9);
    let t1 = seeder.theta_single(&SeedSpec::cw(ws, 1e-3), false).unwrap();
    out.push(check("single, CW seed", &t1.numerator, |n| cw_pump_cw_seed(&p, &seeder, ws, n), 4000));
    let (wa, wb) = (ws, src.omega0() / 3.0 * 0.985);
    let t2 = seeder.theta_double(&SeedSpec::cw(wa, 1e-3), &SeedSpec::cw(wb, 1e-3), false).unwrap();
    out.push(point("double, CW seeds", &t2.numerator, cw_pump_two_cw_seeds(&p, wa, wb)));

    let seed = SeedSpec::pulsed(ws, 7.48e10, 1e-3);
    let t1 = seeder.theta_single(&seed, false).unwrap();
    out.push(check("single, pulsed seed", &t1.numerator, |n| cw_pump_pulsed_seed(&p, &seed, n), 800));

    let other = seed.at_omega(tripletforge::constants::omega_from_wavelength(1664e-9));
    let t2 = seeder.theta_double(&seed, &other, false).unwrap();
    out.push(check("double, pulsed seeds", &t2.numerator, |n| cw_pump_two_pulsed_seeds(&p, &seed, &other, n), 800));
    out
}

pub fn degenerate_pulsed_pump() -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let src = fixture("degenerate", SpectralKind::Pulsed);
    let p = Physics::new(&src);
    let seeder = Seeder::new(&src).unwrap();
    out.push(check("spontaneous", &seeder.spontaneous().integral, |n| spontaneous_pulsed(&p, n), 160));

    let ws = src.omega0() / 3.0 * 0.995;
    let t1 = seeder.theta_single(&SeedSpec::cw(ws, 1e-3), false).unwrap();
    out.push(check("single, CW seed", &t1.numerator, |n| pulsed_pump_cw_seed(&p, &seeder, ws, n), 800));

    let wb = src.omega0() / 3.0 * 1.004;
    let t2 = seeder.theta_double(&SeedSpec::cw(ws, 1e-3), &SeedSpec::cw(wb, 1e-3), false).unwrap();
    out.push(check("double, CW seeds", &t2.numerator, |n| pulsed_pump_two_cw_seeds(&p, ws, wb, n), 4000));

    let seed = SeedSpec::pulsed(ws, 7.48e10, 1e-3);
    let t1 = seeder.theta_single(&seed, false).unwrap();
    out.push(check("single, pulsed seed", &t1.numerator, |n| pulsed_pump_pulsed_seed(&p, &seed, n), 400));

    let other = seed.at_omega(wb);
    let t2 = seeder.theta_double(&seed, &other, false).unwrap();
    out.push(check("double, pulsed seeds", &t2.numerator, |n| pulsed_pump_two_pulsed_seeds(&p, &seed, &other, n), 400));
    out
}
