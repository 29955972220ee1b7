use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain where a law or curve is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inconsistent or incomplete configuration, caught before any compute.
    #[error("validation error: {0}")]
    Validation(String),
    /// Requested guided mode does not exist at some frequencies.
    #[error("mode {mode} is below cutoff at {} frequencies (first: {first:.6e} rad/s)", offending.len())]
    BelowCutoff {
        mode: String,
        offending: Vec<f64>,
        first: f64,
    },
    /// Root bracketing or refinement failed.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Quadrature did not reach its tolerance.
    #[error("quadrature did not converge: value {value:.6e}, estimated relative error {rel_error:.3e} after {levels} levels")]
    NotConverged { value: f64, rel_error: f64, levels: usize },
    /// Spectral grid clips the region where the joint intensity is appreciable.
    #[error("spectral window clips the emission support; suggested window {suggested_nm:?} nm")]
    Window { suggested_nm: (f64, f64) },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Validation(_)
            | Error::BelowCutoff { .. }
            | Error::Window { .. } => 2,
            Error::Numerical(_) | Error::NotConverged { .. } => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
