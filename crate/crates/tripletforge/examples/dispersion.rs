//! Effective indices of the HE11 and HE12 modes of a silica nanowire in
//! air, and the core radius that phase-matches 532 nm -> 3 x 1596 nm.

use tripletforge::constants::{omega_from_wavelength, wavelength_from_omega};
use tripletforge::dispersion::{solve_mode, solve_neff, tune_core_radius, uniform_omega_grid, FiberSpec, ModeLabel};

fn main() -> tripletforge::Result<()> {
    let guess = FiberSpec::silica_in_air(0.40e-6, 0.01)?;
    let w0 = omega_from_wavelength(532e-9);
    let radius = tune_core_radius(&guess, ModeLabel::HE12, ModeLabel::HE11, w0)?;
    println!("phase-matching core radius: {:.6} um", radius * 1e6);

    let fiber = FiberSpec::silica_in_air(radius, 0.01)?;
    let n_pump = solve_neff(&fiber, ModeLabel::HE12, w0)?;
    let n_trip = solve_neff(&fiber, ModeLabel::HE11, w0 / 3.0)?;
    println!("n_eff HE12 @ 532 nm  = {n_pump:.8}");
    println!("n_eff HE11 @ 1596 nm = {n_trip:.8}");

    let omegas = uniform_omega_grid(omega_from_wavelength(1800e-9), omega_from_wavelength(1400e-9), 9);
    let curve = solve_mode(&fiber, ModeLabel::HE11, &omegas)?;
    println!("\n lambda (nm)   n_eff      v_g/c");
    for &w in &omegas {
        let vg = curve.group_velocity(w)? / tripletforge::constants::SPEED_OF_LIGHT;
        println!("{:>10.1}  {:.6}  {:.6}", wavelength_from_omega(w) * 1e9, curve.n_eff(w)?, vg);
    }
    Ok(())
}
