use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Root of `f` inside `[a, b]`, which must bracket a sign change.
///
/// Bisection narrows the bracket first; secant steps then polish the
/// root, falling back to bisection whenever a step leaves the bracket.
pub fn find_root_bracketed<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!(
            "no sign change across bracket [{lo:.9e}, {hi:.9e}] (f = {flo:.3e}, {fhi:.3e})"
        )));
    }
    let scale = |x: f64| if x != 0.0 { x.abs() } else { 1.0 };

    // coarse bisection
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    for _ in 0..200 {
        let width = hi - lo;
        if width <= tol * scale(0.5 * (lo + hi)) {
            break;
        }
        let mut x = lo - flo * (hi - lo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        let (old_lo, old_hi) = (lo, hi);
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // secant stalled on one side: force a bisection step
        if (hi - lo) > 0.5 * (old_hi - old_lo) {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
    }
    let root = if flo.abs() < fhi.abs() { lo } else { hi };
    if hi - lo > 1e3 * tol * scale(root) {
        return Err(Error::Numerical(format!("root refinement stalled at width {:.3e}", hi - lo)));
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn linear_root() {
        let r = find_root_bracketed(|x| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cosine_root() {
        let r = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        assert!(find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn reversed_bracket_is_fine() {
        let r = find_root_bracketed(|x| x * x - 2.0, 2.0, 0.0, 1e-13).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
