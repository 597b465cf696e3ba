//! JSON file formats for matrices and frame evolutions.
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major.

use std::fs;
use std::io::Read;
use std::path::Path;

use bargmann_core::{validate_unitary, Complex64, FrameEvolution, Tolerances, UnitaryMatrix};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `{"n": 3, "entries": [[re, im], ...]}` with `n * n` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Pair>,
}

impl MatrixFile {
    pub fn from_unitary(u: &UnitaryMatrix) -> Self {
        MatrixFile {
            n: u.dim(),
            entries: u.to_row_major().into_iter().map(pair).collect(),
        }
    }

    fn to_dmatrix(&self, what: &str) -> Result<DMatrix<Complex64>, CliError> {
        if self.n == 0 || self.entries.len() != self.n * self.n {
            return Err(CliError::Parse(format!(
                "{what}: expected {} entries for n = {}, found {}",
                self.n * self.n,
                self.n,
                self.entries.len()
            )));
        }
        let values: Vec<Complex64> = self.entries.iter().map(complex).collect();
        Ok(DMatrix::from_row_slice(self.n, self.n, &values))
    }

    pub fn to_unitary(&self, tol: &Tolerances) -> Result<UnitaryMatrix, CliError> {
        Ok(validate_unitary(self.to_dmatrix("matrix")?, tol)?)
    }
}

/// `{"n": 2, "grid": [...], "frames": [[[re, im], ...], ...]}`; one
/// row-major frame per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionFile {
    pub n: usize,
    pub grid: Vec<f64>,
    pub frames: Vec<Vec<Pair>>,
}

impl EvolutionFile {
    pub fn from_evolution(f: &FrameEvolution) -> Self {
        EvolutionFile {
            n: f.dim(),
            grid: f.grid().to_vec(),
            frames: f
                .frames()
                .iter()
                .map(|u| u.to_row_major().into_iter().map(pair).collect())
                .collect(),
        }
    }

    pub fn to_evolution(&self, tol: &Tolerances) -> Result<FrameEvolution, CliError> {
        if self.frames.len() != self.grid.len() {
            return Err(CliError::Parse(format!(
                "{} frames for {} grid points",
                self.frames.len(),
                self.grid.len()
            )));
        }
        let frames = self
            .frames
            .iter()
            .enumerate()
            .map(|(i, entries)| {
                let m = MatrixFile {
                    n: self.n,
                    entries: entries.clone(),
                };
                m.to_unitary(tol).map_err(|e| e.context(&format!("frame {i}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FrameEvolution::new(self.grid.clone(), frames)?)
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}
