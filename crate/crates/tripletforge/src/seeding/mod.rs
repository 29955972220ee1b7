//! Seeded emission: overlap coefficients Θ1/Θ2 for every pump and seed
//! combination, fluxes and spectra, seed scans and double-seed maps.

mod output;
mod scan;
mod seed;
mod theta;
mod throughput;

pub use output::{OutputGrid, Spectrum};
pub use scan::{level_set_topology, DoubleSeedMap, LevelSetTopology, ScanRow};
pub use seed::{
    check_disjoint, pump_photons_in_seed_window, seed_photon_number, SeedEnvelope, SeedSpec,
    DEFAULT_SEED_LINEWIDTH_HZ, SEED_REACH_SIGMAS,
};
pub use theta::{Seeder, Theta, CW_EXCLUSION_CELLS, DEFAULT_OUTPUT_CELLS, PULSED_EXCLUSION_SIGMAS};
pub use throughput::{Contribution, ContributionKind, Conventions, ThroughputReport};
