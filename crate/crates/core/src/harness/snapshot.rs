//! Binary snapshot files.
//!
//! Layout, all little-endian: magic `RGAC`, version `u32`, `n` `u32`,
//! component count `u32`, time `f64`, then each component as `n × n`
//! `f64` real-space samples in row-major order (`i1 * n + i2`, with `i1`
//! the `x₁` index). Components are `u₁, u₂` followed by the order
//! parameter components.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::spectral::{Grid, SpectralVector};
use crate::timestepper::State;

pub const MAGIC: &[u8; 4] = b"RGAC";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("bad magic {0:?}, expected \"RGAC\"")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u32),
    #[error("truncated snapshot: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("snapshot has n = {snapshot}, but the configuration uses n = {config}")]
    GridMismatch { snapshot: usize, config: usize },
    #[error("snapshot has {found} components, expected {expected}")]
    ComponentMismatch { expected: usize, found: usize },
    #[error("snapshot contains non-finite samples")]
    NonFinite,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub time: f64,
    pub components: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn from_state(grid: &Grid, state: &State) -> Self {
        let [u1, u2] = grid.inverse_vector(&state.u);
        let mut components = vec![u1, u2];
        components.extend(state.phi.iter().map(|c| grid.inverse(c)));
        Self {
            n: grid.n(),
            time: state.t,
            components,
        }
    }

    /// Spectral reconstruction; `order_components` is the number of
    /// order-parameter components the caller expects.
    pub fn to_state(&self, grid: &Grid, order_components: usize) -> Result<State, SnapshotError> {
        if self.n != grid.n() {
            return Err(SnapshotError::GridMismatch {
                snapshot: self.n,
                config: grid.n(),
            });
        }
        if self.components.len() != 2 + order_components {
            return Err(SnapshotError::ComponentMismatch {
                expected: 2 + order_components,
                found: self.components.len(),
            });
        }
        let tr = |s: &[f64]| grid.forward(s).expect("component length checked on read");
        let u = SpectralVector::new(tr(&self.components[0]), tr(&self.components[1]));
        let phi = self.components[2..].iter().map(|c| tr(c)).collect();
        State::new(grid, self.time, u, phi).map_err(|_| SnapshotError::GridMismatch {
            snapshot: self.n,
            config: grid.n(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.components.len() * self.n * self.n * 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.n as u32).to_le_bytes());
        out.extend_from_slice(&(self.components.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        for c in &self.components {
            for v in c {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SnapshotError> {
        if bytes.len() < HEADER_LEN {
            return Err(SnapshotError::Truncated {
                expected: HEADER_LEN,
                found: bytes.len(),
            });
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if &magic != MAGIC {
            return Err(SnapshotError::BadMagic(magic));
        }
        let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let version = word(4);
        if version != VERSION {
            return Err(SnapshotError::UnsupportedVersion(version));
        }
        let n = word(8) as usize;
        let count = word(12) as usize;
        let time = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let expected = HEADER_LEN + count * n * n * 8;
        if bytes.len() != expected {
            return Err(SnapshotError::Truncated {
                expected,
                found: bytes.len(),
            });
        }
        let components = bytes[HEADER_LEN..]
            .chunks_exact(n * n * 8)
            .map(|chunk| {
                chunk
                    .chunks_exact(8)
                    .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            time,
            components,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), SnapshotError> {
        if self.components.iter().flatten().any(|v| !v.is_finite()) || !self.time.is_finite() {
            return Err(SnapshotError::NonFinite);
        }
        fs::write(path, self.to_bytes()).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self, SnapshotError> {
        let bytes = fs::read(path).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_bytes(&bytes)
    }
}

pub fn snapshot_write(path: &Path, grid: &Grid, state: &State) -> Result<(), SnapshotError> {
    Snapshot::from_state(grid, state).write(path)
}

pub fn snapshot_read(path: &Path, grid: &Grid, order_components: usize) -> Result<State, SnapshotError> {
    Snapshot::read(path)?.to_state(grid, order_components)
}
