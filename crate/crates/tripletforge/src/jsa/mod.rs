//! Joint spectral amplitude of the photon triplet and the spontaneous
//! generation rate.

mod amplitude;
mod grid;
mod kernel;
mod rates;
mod source;

pub use amplitude::{joint_amplitude, JointAmplitude, Marginals, JSA_SUPPORT_THRESHOLD};
pub use grid::{default_window, resolve_window as grid_window, FrequencyGrid};
pub use kernel::{delta_k, phase_matching, pump_envelope, sinc, PUMP_CUTOFF_SIGMAS};
pub use rates::{c3_squared, c3_squared_cw, c3_squared_pulsed, n0, Spontaneous};
pub use source::{PumpSpec, Source, SourceConfig, SpectralKind, PUMP_SPAN_FRACTION, TRIPLET_SPAN_FRACTION};
