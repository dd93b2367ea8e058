//! JSON matrix files: `{"dim": N, "kind": "covariance" | "map", "data": [N*N floats, row-major]}`.

use std::fs;
use std::path::Path;

use bwbary::linalg::{CovMatrix, SymMap};
use bwbary::{BwError, Matrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Covariance,
    Map,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub kind: MatrixKind,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn covariance(m: &CovMatrix<f64>) -> Self {
        Self { dim: m.dim(), kind: MatrixKind::Covariance, data: m.matrix().as_slice().to_vec() }
    }

    pub fn map(m: &SymMap<f64>) -> Self {
        Self { dim: m.dim(), kind: MatrixKind::Map, data: m.matrix().as_slice().to_vec() }
    }

    fn matrix(&self) -> Result<Matrix<f64>, BwError> {
        Matrix::from_row_major(self.dim, self.dim, self.data.clone())
    }

    /// Parses and checks shape and finiteness; covariance files must also pass the PSD checks.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.dim == 0 {
            return Err("dim must be positive".into());
        }
        if file.data.len() != file.dim * file.dim {
            return Err(format!("data has {} entries, expected dim^2 = {}", file.data.len(), file.dim * file.dim));
        }
        if file.data.iter().any(|x| !x.is_finite()) {
            return Err("data contains non-finite entries".into());
        }
        if file.kind == MatrixKind::Covariance {
            file.to_covariance().map_err(|e| e.to_string())?;
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|message| CliError::BadFile { path: path.to_path_buf(), message })
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }

    pub fn to_covariance(&self) -> Result<CovMatrix<f64>, BwError> {
        CovMatrix::new(self.matrix()?)
    }

    pub fn to_map(&self) -> Result<SymMap<f64>, BwError> {
        SymMap::new(self.matrix()?)
    }
}

/// Loads a covariance file; a `map` file or an invalid matrix is an input error.
pub fn load_covariance(path: &Path) -> CliResult<CovMatrix<f64>> {
    let file = MatrixFile::load(path)?;
    if file.kind != MatrixKind::Covariance {
        return Err(CliError::BadFile { path: path.to_path_buf(), message: "expected kind \"covariance\"".into() });
    }
    file.to_covariance().map_err(|e| CliError::BadFile { path: path.to_path_buf(), message: e.to_string() })
}
