//! Structural properties of the spontaneous and seeded calculations.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use tripletforge::constants::omega_from_wavelength;
use tripletforge::io::RunConfig;
use tripletforge::jsa::{grid_window, joint_amplitude, FrequencyGrid, Source, SpectralKind};
use tripletforge::seeding::{ContributionKind, OutputGrid, SeedSpec, Seeder};

fn source(preset: &str, kind: SpectralKind) -> Source {
    let cfg = RunConfig::preset(preset).unwrap();
    Source::build(cfg.source_config(Some(kind), None).unwrap()).unwrap()
}

/// Seeders are costly to build; share one per fixture across tests.
fn seeder(preset: &str, kind: SpectralKind) -> &'static Seeder {
    static CACHE: OnceLock<Mutex<HashMap<(String, bool), &'static Seeder>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry((preset.to_string(), kind == SpectralKind::Pulsed))
        .or_insert_with(|| Box::leak(Box::new(Seeder::new(&source(preset, kind)).unwrap())))
}

fn nm(l: f64) -> f64 {
    omega_from_wavelength(l * 1e-9)
}

#[test]
fn normalized_jsa_has_unit_integral_and_exact_symmetry() {
    for (preset, kind) in [("degenerate", SpectralKind::Pulsed), ("nondegenerate", SpectralKind::Pulsed)] {
        let src = source(preset, kind);
        let (lo, hi) = grid_window(&src).unwrap();
        let grid = FrequencyGrid::plane_aligned(src.omega0(), lo, hi, 32).unwrap();
        let jsa = joint_amplitude(&src, &grid, true).unwrap();
        assert!((jsa.total() - 1.0).abs() < 1e-3, "{preset}: {}", jsa.total());
        let n = grid.count;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = jsa.value(i, j, k);
                    for w in [jsa.value(j, i, k), jsa.value(k, j, i), jsa.value(i, k, j), jsa.value(j, k, i), jsa.value(k, i, j)] {
                        assert_eq!(v, w, "{preset} ({i},{j},{k})");
                    }
                }
            }
        }
    }
}

#[test]
fn emitted_spectra_integrate_to_totals() {
    let cases = [
        ("nondegenerate", SpectralKind::Monochromatic, vec![SeedSpec::cw(nm(1532.0), 1e-2), SeedSpec::cw(nm(1664.0), 1e-2)]),
        ("degenerate", SpectralKind::Monochromatic, vec![SeedSpec { rep_rate_hz: Some(1e7), ..SeedSpec::pulsed(nm(1596.0), 7.48e10, 1e-2) }]),
        ("degenerate", SpectralKind::Pulsed, vec![SeedSpec::cw(nm(1580.0), 1e-2)]),
        ("degenerate", SpectralKind::Pulsed, vec![SeedSpec::pulsed(nm(1610.0), 7.48e10, 1e-2)]),
    ];
    for (preset, kind, seeds) in cases {
        let report = seeder(preset, kind).throughput(&seeds, true).unwrap();
        let s1 = report.n1_spectrum.as_ref().unwrap();
        let s2 = report.n2_spectrum.as_ref().unwrap();
        let (t1, t2) = (s1.trapezoid(), s2.trapezoid());
        assert!((t1 / report.n1_per_s - 1.0).abs() < 1e-2, "{preset} {kind:?}: N1 {t1:e} vs {:e}", report.n1_per_s);
        assert!((t2 / report.n2_per_s - 1.0).abs() < 1e-2, "{preset} {kind:?}: N2 {t2:e} vs {:e}", report.n2_per_s);
    }
}

#[test]
fn fluxes_scale_with_seed_power() {
    for kind in [SpectralKind::Monochromatic, SpectralKind::Pulsed] {
        let s = seeder("degenerate", kind);
        let base = SeedSpec::cw(nm(1590.0), 1e-3);
        let r1 = s.throughput(&[base.clone()], false).unwrap();
        for k in [2.0, 64.0] {
            let rk = s.throughput(&[base.with_power(k * 1e-3)], false).unwrap();
            // powers of two keep the arithmetic exact
            assert_eq!(rk.n1_per_s, k * r1.n1_per_s, "{kind:?} x{k}");
            assert_eq!(rk.n2_per_s, k * k * r1.n2_per_s, "{kind:?} x{k}");
            assert_eq!(rk.n0_per_s, r1.n0_per_s);
        }
    }
}

#[test]
fn multi_seed_single_terms_add_and_cross_terms_are_symmetric() {
    let s = seeder("nondegenerate", SpectralKind::Monochromatic);
    let a = SeedSpec::cw(nm(1532.0), 1e-2);
    let b = SeedSpec::cw(nm(1664.0), 3e-3);
    let ab = s.throughput(&[a.clone(), b.clone()], false).unwrap();
    let ba = s.throughput(&[b.clone(), a.clone()], false).unwrap();
    let ra = s.throughput(&[a.clone()], false).unwrap();
    let rb = s.throughput(&[b.clone()], false).unwrap();
    assert_eq!(ab.n1_per_s, ra.n1_per_s + rb.n1_per_s);
    assert_eq!(ba.n1_per_s, rb.n1_per_s + ra.n1_per_s);
    let cross_ab = ab.contribution(ContributionKind::CrossDouble, &[0, 1]).unwrap();
    let cross_ba = ba.contribution(ContributionKind::CrossDouble, &[0, 1]).unwrap();
    assert_eq!(cross_ab.flux_per_s, cross_ba.flux_per_s);
    assert_eq!(cross_ab.theta, cross_ba.theta);
    let ta = s.theta_double(&a, &b, false).unwrap().value;
    let tb = s.theta_double(&b, &a, false).unwrap().value;
    assert_eq!(ta, tb);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let src = source("degenerate", SpectralKind::Pulsed);
            let out = OutputGrid::from_window(grid_window(&src).unwrap(), 128).unwrap();
            let s = Seeder::with_output(&src, out).unwrap();
            let r = s.throughput(&[SeedSpec::cw(nm(1600.0), 1e-3)], true).unwrap();
            (s.spontaneous().n0_per_s, r.n1_per_s, r.n2_per_s, r.n1_spectrum.unwrap().per_nm)
        })
    };
    let one = run(1);
    for t in [2, 5] {
        let other = run(t);
        assert_eq!(one.0.to_bits(), other.0.to_bits());
        assert_eq!(one.1.to_bits(), other.1.to_bits());
        assert_eq!(one.2.to_bits(), other.2.to_bits());
        assert!(one.3.iter().zip(&other.3).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn single_flux_is_linear_in_power(lambda in 1480.0f64..1720.0, p in 1e-5f64..1e-1, k in 1.5f64..20.0) {
        let s = seeder("degenerate", SpectralKind::Monochromatic);
        let seed = SeedSpec::cw(nm(lambda), p);
        let r1 = s.throughput(&[seed.clone()], false).unwrap();
        let rk = s.throughput(&[seed.with_power(k * p)], false).unwrap();
        prop_assert!((rk.n1_per_s - k * r1.n1_per_s).abs() <= 1e-12 * rk.n1_per_s.abs());
        prop_assert!((rk.n2_per_s - k * k * r1.n2_per_s).abs() <= 1e-12 * rk.n2_per_s.abs());
    }

    #[test]
    fn cross_overlap_is_symmetric(l1 in 1480.0f64..1720.0, l2 in 1480.0f64..1720.0) {
        let s = seeder("nondegenerate", SpectralKind::Monochromatic);
        let (a, b) = (SeedSpec::cw(nm(l1), 1e-3), SeedSpec::cw(nm(l2), 1e-3));
        let x = s.theta_double(&a, &b, false).unwrap().value;
        let y = s.theta_double(&b, &a, false).unwrap().value;
        prop_assert_eq!(x, y);
    }
}
