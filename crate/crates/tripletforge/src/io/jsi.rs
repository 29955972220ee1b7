use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::wavelength_from_omega;
use crate::error::{Error, Result};
use crate::jsa::{JointAmplitude, SpectralKind};

/// Header written next to a binary joint-intensity array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsiHeader {
    pub format: String,
    /// Index order of the flat array: ω1 slowest, ω3 fastest.
    pub order: String,
    pub shape: [usize; 3],
    pub omega_min_rad_s: f64,
    pub omega_step_rad_s: f64,
    pub lambda_nm: Vec<f64>,
    pub pump_kind: SpectralKind,
    pub normalized: bool,
    /// Factor that was divided out when `normalized` is set.
    pub norm: f64,
    pub config_hash: String,
    pub data_file: String,
}

/// Joint intensity on a cubic grid, ready for export.
#[derive(Debug, Clone, PartialEq)]
pub struct JsiCube {
    pub omega_min_rad_s: f64,
    pub omega_step_rad_s: f64,
    pub n: usize,
    pub pump_kind: SpectralKind,
    pub normalized: bool,
    pub norm: f64,
    pub values: Vec<f64>,
}

impl JsiCube {
    pub fn from_amplitude(jsa: &JointAmplitude) -> Self {
        Self {
            omega_min_rad_s: jsa.grid.omega_min,
            omega_step_rad_s: jsa.grid.step,
            n: jsa.grid.count,
            pump_kind: jsa.pump_kind,
            normalized: jsa.normalized,
            norm: jsa.norm,
            values: jsa.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    pub fn lambda_nm(&self) -> Vec<f64> {
        (0..self.n).map(|i| wavelength_from_omega(self.omega_min_rad_s + self.omega_step_rad_s * i as f64) * 1e9).collect()
    }
}

/// Write `<stem>.json` and `<stem>.f64` (little-endian). Returns both paths.
pub fn write_jsi_binary(dir: &Path, stem: &str, cube: &JsiCube, config_hash: &str) -> Result<(PathBuf, PathBuf)> {
    let data_name = format!("{stem}.f64");
    let header = JsiHeader {
        format: "f64le".into(),
        order: "omega1-major".into(),
        shape: [cube.n; 3],
        omega_min_rad_s: cube.omega_min_rad_s,
        omega_step_rad_s: cube.omega_step_rad_s,
        lambda_nm: cube.lambda_nm(),
        pump_kind: cube.pump_kind,
        normalized: cube.normalized,
        norm: cube.norm,
        config_hash: config_hash.into(),
        data_file: data_name.clone(),
    };
    let mut bytes = Vec::with_capacity(cube.values.len() * 8);
    for v in &cube.values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let (hp, dp) = (dir.join(format!("{stem}.json")), dir.join(&data_name));
    std::fs::write(&dp, bytes)?;
    std::fs::write(&hp, serde_json::to_string_pretty(&header)?)?;
    Ok((hp, dp))
}

/// Read a header/binary pair written by [`write_jsi_binary`].
pub fn read_jsi_binary(header_path: &Path) -> Result<(JsiHeader, Vec<f64>)> {
    let header: JsiHeader = serde_json::from_str(&std::fs::read_to_string(header_path)?)?;
    let dir = header_path.parent().unwrap_or(Path::new("."));
    let bytes = std::fs::read(dir.join(&header.data_file))?;
    let n = header.shape.iter().product::<usize>();
    if bytes.len() != 8 * n {
        return Err(Error::Validation(format!("binary holds {} bytes, header promises {}", bytes.len(), 8 * n)));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect();
    Ok((header, values))
}

/// CSV rows (λ1, λ2, λ3, jsi); meant for small grids.
pub fn jsi_csv_rows(cube: &JsiCube) -> Vec<Vec<f64>> {
    let lam = cube.lambda_nm();
    let n = cube.n;
    (0..n * n * n).map(|p| vec![lam[p / (n * n)], lam[(p / n) % n], lam[p % n], cube.values[p]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let cube = JsiCube {
            omega_min_rad_s: 1.1e15,
            omega_step_rad_s: 1e12,
            n: 2,
            pump_kind: SpectralKind::Pulsed,
            normalized: true,
            norm: 3.0,
            values: (0..8).map(|v| v as f64 * 0.125).collect(),
        };
        let dir = tempfile::tempdir().unwrap();
        let (h, _) = write_jsi_binary(dir.path(), "jsi", &cube, "abc").unwrap();
        let (header, values) = read_jsi_binary(&h).unwrap();
        assert_eq!(values, cube.values);
        assert_eq!(header.shape, [2, 2, 2]);
        assert_eq!(header.config_hash, "abc");
        assert_eq!(jsi_csv_rows(&cube).len(), 8);
    }
}
