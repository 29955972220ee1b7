//! Configuration, dispersion cache, CSV/JSON/binary writers, SVG figures
//! and run manifests.

mod cache;
mod config;
mod csv;
mod jsi;
mod manifest;
pub mod svg;

pub use cache::{build_source, CacheEvent, CacheStatus, DispersionCache, CACHE_ENV};
pub use config::{
    FiberConfig, JsiConfig, JsiFormat, PumpConfig, RunConfig, ScanConfig, SeedConfig, SeedTemplate, SetConfig,
    TableConfig, TablePoint, PRESET_PUMP_SIGMA_RAD_S, TUNED_CORE_RADIUS_UM,
};
pub use csv::{csv_string, fmt_num, read_csv, write_csv};
pub use jsi::{jsi_csv_rows, read_jsi_binary, write_jsi_binary, JsiCube, JsiHeader};
pub use manifest::{ManifestConventions, RunManifest};
