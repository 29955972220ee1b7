//! Physical constants (CODATA 2018, SI).

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Vacuum wavelength (m) to angular frequency (rad/s).
pub fn omega_from_wavelength(lambda_m: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / lambda_m
}

/// Angular frequency (rad/s) to vacuum wavelength (m).
pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega
}
