//! Stimulated-emission tomography: raster two narrow CW seeds over the
//! phase-matched band, record the doubly seeded spectra and invert them
//! into the triplet joint spectral intensity.

mod fidelity;
mod raster;

pub use fidelity::{bhattacharyya, fill_holes, upsample_bilinear};
pub use raster::{
    delta_k, reconstruct_jsi, simulate_set_scan, truth_nodes, truth_plane, SetRaster, SetReconstruction, SetScanConfig,
    CONTAMINATION_FLOOR, DEFAULT_LINEWIDTH_HZ,
};

use crate::error::Result;

/// Normalised overlap Σ√(pq)/√(ΣpΣq) of two nonnegative maps on the same grid.
pub fn fidelity(recon: &[f64], truth: &[f64]) -> Result<f64> {
    bhattacharyya(recon, truth)
}
