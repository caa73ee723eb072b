//! JSON state files: `{"dims": [dA, dB], "data": [[re, im], ...]}` with the
//! `(dA·dB)²` entries in row-major order.
//!
//! Floats are written in shortest round-trip form, so write-then-read is
//! bit-exact.

use std::fs;
use std::path::Path;

use entmap_core::bipartite::{BipartiteDims, DensityMatrix};
use entmap_core::matcore::{ComplexMatrix, Tolerance};
use entmap_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub data: Vec<[f64; 2]>,
}

/// How strictly a loaded matrix is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Hermitian, PSD and unit trace within tolerance.
    Validated,
    /// Shape only; for inspecting matrices that are not states.
    Raw,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dims();
        Self { dims: [d.a, d.b], data: rho.matrix().data().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_density(&self, mode: LoadMode, tol: &Tolerance) -> CliResult<DensityMatrix> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        let n = dims.total();
        if self.data.len() != n * n {
            return Err(entmap_core::Error::DimensionMismatch(format!(
                "dims {}x{} need {} entries, file has {}",
                dims.a,
                dims.b,
                n * n,
                self.data.len()
            ))
            .into());
        }
        let entries = self.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        let mat = ComplexMatrix::new(n, n, entries)?;
        Ok(match mode {
            LoadMode::Validated => DensityMatrix::new(dims, mat, tol)?,
            LoadMode::Raw => DensityMatrix::raw(dims, mat)?,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}

pub fn load_state(path: &Path, mode: LoadMode, tol: &Tolerance) -> CliResult<DensityMatrix> {
    StateFile::read(path)?.to_density(mode, tol)
}
