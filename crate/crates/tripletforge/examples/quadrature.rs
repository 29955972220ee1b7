//! The adaptive tensor-product Gauss-Legendre integrator on a sharply
//! peaked 2-D integrand, with its convergence history.

use tripletforge::numerics::{integrate_nd, pairwise_sum, Axis, QuadratureSpec};

fn main() -> tripletforge::Result<()> {
    let spec = QuadratureSpec { rel_tol: 1e-10, ..QuadratureSpec::default() };
    // ∫∫ sinc²(20x) sinc²(20y) over [-1, 1]² ≈ (π/20)²
    let s = |x: f64| if x == 0.0 { 1.0 } else { (20.0 * x).sin() / (20.0 * x) };
    let report = integrate_nd(|p: &[f64]| (s(p[0]) * s(p[1])).powi(2), &[Axis::new(-1.0, 1.0), Axis::new(-1.0, 1.0)], &spec)?;
    let reference = (std::f64::consts::PI / 20.0).powi(2);
    println!("value      {:.12e}", report.value);
    println!("~reference {:.12e} (infinite domain)", reference);
    println!("levels {} evaluations {} converged {}", report.levels, report.evaluations, report.converged);
    for (l, e) in report.history.iter().enumerate() {
        println!("  level {} est. rel. error {e:.2e}", l + 1);
    }
    let terms: Vec<f64> = (1..=1_000_000).map(|k| 1.0 / (k as f64).powi(2)).collect();
    println!("pairwise sum of 1/k^2: {:.15}", pairwise_sum(&terms));
    Ok(())
}
