//! Photon-triplet generation in thin fibers.

pub mod cli;
pub mod constants;
pub mod dispersion;
mod error;
pub mod io;
pub mod jsa;
pub mod numerics;
pub mod seeding;
pub mod tomography;

pub use error::{Error, Result};
