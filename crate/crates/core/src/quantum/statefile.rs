//! JSON state files: `{ "dims": [d_A, d_B], "matrix": [[re, im], ...] }`,
//! row-major, validated as a density matrix on load.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::CMatrix;
use crate::quantum::state::DensityMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self {
            dims: rho.dims().to_vec(),
            matrix: rho.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        let n: usize = self.dims.iter().product();
        if self.matrix.len() != n * n {
            return Err(Error::Parse(format!(
                "dims {:?} need {} matrix entries, found {}",
                self.dims,
                n * n,
                self.matrix.len()
            )));
        }
        let data = self.matrix.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        DensityMatrix::new(CMatrix::from_vec(data)?, self.dims)
    }
}

pub fn parse_state(json: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(json)?;
    file.into_state()
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state serializes")
}
