//! State files: a JSON manifest next to a flat little-endian array of
//! `(re, im)` pairs in lattice order (first axis fastest), one block per
//! sector.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use super::state::{RepKind, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Complex64,
    Complex128,
}

impl Precision {
    fn pair_bytes(self) -> usize {
        match self {
            Precision::Complex64 => 8,
            Precision::Complex128 => 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateManifest {
    pub grid: GridSpec,
    pub kind: RepKind,
    pub sectors: usize,
    pub precision: Precision,
    pub order: String,
    pub data_file: String,
}

const ORDER: &str = "row-major, p1 fastest";

pub fn encode(state: &StateVector, precision: Precision) -> Vec<u8> {
    let len: usize = state.sectors().iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(len * precision.pair_bytes());
    for field in state.sectors() {
        for z in field {
            match precision {
                Precision::Complex64 => {
                    out.extend_from_slice(&(z.re as f32).to_le_bytes());
                    out.extend_from_slice(&(z.im as f32).to_le_bytes());
                }
                Precision::Complex128 => {
                    out.extend_from_slice(&z.re.to_le_bytes());
                    out.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
    }
    out
}

pub fn decode(manifest: &StateManifest, bytes: &[u8]) -> Result<StateVector> {
    manifest.grid.validate()?;
    let points = manifest.grid.n.pow(3);
    let expected = points * manifest.sectors * manifest.precision.pair_bytes();
    if !(1..=2).contains(&manifest.sectors) {
        return Err(Error::Format(format!("sector count {} not in 1..=2", manifest.sectors)));
    }
    if bytes.len() != expected {
        return Err(Error::Format(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values: Vec<Complex64> = match manifest.precision {
        Precision::Complex64 => bytes
            .chunks_exact(8)
            .map(|c| {
                let re = f32::from_le_bytes(c[0..4].try_into().unwrap());
                let im = f32::from_le_bytes(c[4..8].try_into().unwrap());
                Complex64::new(re as f64, im as f64)
            })
            .collect(),
        Precision::Complex128 => bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[0..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..16].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect(),
    };
    let sectors = values.chunks_exact(points).map(<[Complex64]>::to_vec).collect();
    Ok(StateVector::from_parts(manifest.grid, manifest.kind, sectors))
}

/// Writes `<stem>.json` and `<stem>.bin` into `dir`; returns the manifest path.
pub fn write_state(dir: &Path, stem: &str, state: &StateVector, precision: Precision) -> Result<PathBuf> {
    let data_file = format!("{stem}.bin");
    let manifest = StateManifest {
        grid: state.grid_spec(),
        kind: state.kind(),
        sectors: state.sector_count(),
        precision,
        order: ORDER.to_string(),
        data_file: data_file.clone(),
    };
    fs::write(dir.join(&data_file), encode(state, precision))?;
    let path = dir.join(format!("{stem}.json"));
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}

pub fn read_state(manifest_path: &Path) -> Result<StateVector> {
    let manifest: StateManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let bytes = fs::read(dir.join(&manifest.data_file))?;
    decode(&manifest, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{build_grid, gaussian_packet, PacketSpec, Placement};

    #[test]
    fn first_pair_is_little_endian_real_then_imaginary() {
        let g = build_grid(8, 4.0, 1.0).unwrap();
        let mut s = StateVector::zeros(&g, RepKind::Momentum, 1);
        s.sectors_mut()[0][0] = Complex64::new(1.5, -2.0);
        let bytes = encode(&s, Precision::Complex128);
        assert_eq!(bytes.len(), 512 * 16);
        assert_eq!(&bytes[0..8], &1.5f64.to_le_bytes());
        assert_eq!(&bytes[8..16], &(-2.0f64).to_le_bytes());
    }

    #[test]
    fn file_round_trip() {
        let g = build_grid(16, 8.0, 1.0).unwrap();
        let s = gaussian_packet(&g, &PacketSpec::new([0.2, 0.0, 0.0], 0.8, Placement::Minus)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = write_state(dir.path(), "psi", &s, Precision::Complex128).unwrap();
        assert_eq!(read_state(&path).unwrap(), s);
        let path32 = write_state(dir.path(), "psi32", &s, Precision::Complex64).unwrap();
        let back = read_state(&path32).unwrap();
        for (a, b) in back.sectors()[0].iter().zip(&s.sectors()[0]) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn truncated_data_is_rejected() {
        let g = build_grid(8, 4.0, 1.0).unwrap();
        let s = StateVector::zeros(&g, RepKind::Position, 2);
        let manifest = StateManifest {
            grid: g.spec(),
            kind: RepKind::Position,
            sectors: 2,
            precision: Precision::Complex128,
            order: ORDER.into(),
            data_file: "x.bin".into(),
        };
        let bytes = encode(&s, Precision::Complex128);
        assert!(decode(&manifest, &bytes[..bytes.len() - 1]).is_err());
    }
}
