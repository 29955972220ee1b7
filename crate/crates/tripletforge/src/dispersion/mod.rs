//! Material index, step-index vector mode solver, mode curves and the
//! four-field transverse overlap.

mod curve;
mod fiber;
mod material;
mod mode;
mod overlap;
mod solver;

pub use curve::{ModeCurve, Provenance};
pub use fiber::FiberSpec;
pub use material::MaterialIndex;
pub use mode::ModeLabel;
pub use overlap::{effective_overlap, DEFAULT_RADIAL_NODES, overlap_integral, FlatTop, ModeField, OverlapResult, TransverseProfile};
pub use solver::{characteristic, solve_mode, solve_neff, tune_core_radius, uniform_omega_grid, Characteristic};
