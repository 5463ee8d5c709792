//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2], "kind": "pure", "amplitudes": [[0.7071067811865476, 0.0], [0, 0], [0, 0], [0.7071067811865476, 0.0]]}
//! {"dims": [2], "kind": "mixed", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{CMatrix, CVector, DensityMatrix, PureState, State};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl StateFile {
    pub fn from_state(state: &State) -> Self {
        match state {
            State::Pure(p) => StateFile {
                dims: p.dims().to_vec(),
                kind: StateKind::Pure,
                amplitudes: Some(p.amplitudes().iter().map(pair).collect()),
                matrix: None,
            },
            State::Mixed(m) => {
                let mat = m.matrix();
                StateFile {
                    dims: m.dims().to_vec(),
                    kind: StateKind::Mixed,
                    amplitudes: None,
                    matrix: Some(
                        (0..mat.nrows())
                            .map(|i| (0..mat.ncols()).map(|j| pair(&mat[(i, j)])).collect())
                            .collect(),
                    ),
                }
            }
        }
    }

    /// Validates the payload. With `renormalize`, a pure vector is rescaled to unit
    /// norm and a matrix is symmetrized and rescaled to unit trace before checking.
    pub fn into_state(self, renormalize: bool) -> Result<State> {
        match self.kind {
            StateKind::Pure => {
                if self.matrix.is_some() {
                    return Err(Error::Parse("pure state file must not carry 'matrix'".into()));
                }
                let amps = self
                    .amplitudes
                    .ok_or_else(|| Error::Parse("pure state file needs 'amplitudes'".into()))?;
                let v = CVector::from_iterator(amps.len(), amps.iter().map(|[re, im]| Complex64::new(*re, *im)));
                let psi = if renormalize {
                    PureState::normalized(self.dims, v)?
                } else {
                    PureState::new(self.dims, v)?
                };
                Ok(State::Pure(psi))
            }
            StateKind::Mixed => {
                if self.amplitudes.is_some() {
                    return Err(Error::Parse("mixed state file must not carry 'amplitudes'".into()));
                }
                let rows = self
                    .matrix
                    .ok_or_else(|| Error::Parse("mixed state file needs 'matrix'".into()))?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse("'matrix' must be square".into()));
                }
                let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                let rho = if renormalize {
                    DensityMatrix::normalized(self.dims, m)?
                } else {
                    DensityMatrix::new(self.dims, m)?
                };
                Ok(State::Mixed(rho))
            }
        }
    }
}

pub fn parse_state_json(text: &str, renormalize: bool) -> Result<State> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state(renormalize)
}

pub fn state_to_json(state: &State) -> String {
    serde_json::to_string(&StateFile::from_state(state)).expect("state file serializes")
}
