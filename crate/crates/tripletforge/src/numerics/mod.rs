//! Quadrature, root finding, summation and interpolation kernels.
//!
//! Everything here is deterministic: node placement depends only on the
//! inputs, and reductions use a fixed pairwise tree, so results are
//! bit-identical regardless of how many worker threads evaluate nodes.

mod gauss;
mod quadrature;
mod roots;
mod spline;
mod summation;

pub use gauss::{composite_rule, gauss_legendre, FixedRule};
pub use quadrature::{integrate_nd, Axis, ConvergenceReport, QuadratureSpec, Rule};
pub use roots::{find_root_bracketed, DEFAULT_ROOT_TOL};
pub use spline::CubicSpline;
pub use summation::{pairwise_sum, pairwise_sum_complex};
