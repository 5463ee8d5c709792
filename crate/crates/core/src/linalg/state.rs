use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::policy;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::arg("dims must list at least one subsystem"));
    }
    if let Some(pos) = dims.iter().position(|&d| d == 0) {
        return Err(Error::arg(format!("subsystem {pos} has dimension 0")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::arg("total dimension overflows"))
}

/// A normalized state vector over an ordered list of subsystems.
///
/// Indexing is big-endian: subsystem 0 is the most significant digit of the
/// basis index. For three qubits, index 6 = `0b110` is |1⟩⊗|1⟩⊗|0⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates length and unit norm (within the active norm tolerance).
    pub fn new(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::dims(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                total
            )));
        }
        let norm = amplitudes.norm();
        let deviation = (norm - 1.0).abs();
        if !(deviation <= policy::current().norm) {
            return Err(Error::NotNormalized { norm, deviation });
        }
        Ok(Self { amplitudes, dims })
    }

    /// Like [`PureState::new`] but rescales to unit norm first. Fails only on a zero vector.
    pub fn normalized(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        Self::new(dims, amplitudes / Complex64::new(norm, 0.0))
    }

    pub fn from_slice(dims: Vec<usize>, amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(dims, CVector::from_column_slice(amplitudes))
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }
}

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if !matrix.is_square() || matrix.nrows() != total {
            return Err(Error::dims(format!(
                "{}x{} matrix for total dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                total
            )));
        }
        let tol = policy::current().structural;
        let herm = hermiticity_deviation(&matrix);
        if !(herm <= tol) {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (max deviation {herm:.3e})"
            )));
        }
        let trace = matrix.trace();
        if !((trace.re - 1.0).abs() <= tol && trace.im.abs() <= tol) {
            return Err(Error::InvalidDensity(format!(
                "trace is {:.12} + {:.3e}i",
                trace.re, trace.im
            )));
        }
        let min_eig = super::ops::hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if !(min_eig >= -tol) {
            return Err(Error::InvalidDensity(format!(
                "minimum eigenvalue {min_eig:.3e} is negative"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Rescales by the trace and symmetrizes before validating.
    pub fn normalized(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let trace = matrix.trace().re;
        if !(trace > 0.0) || !trace.is_finite() {
            return Err(Error::arg("cannot normalize a matrix with non-positive trace"));
        }
        let m = (&matrix + matrix.adjoint()) * Complex64::new(0.5 / trace, 0.0);
        Self::new(dims, m)
    }

    /// Caller guarantees the invariants (used for products of validated states).
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dims == [2, 2]
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut eig = super::ops::hermitian_eigenvalues(&self.matrix);
        eig.reverse();
        eig
    }

    /// Number of eigenvalues above the policy's rank threshold.
    pub fn numerical_rank(&self) -> usize {
        let tol = policy::current().rank;
        self.spectrum().iter().filter(|&&v| v > tol).count()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Either kind of state, as read from a state file or a builtin spec.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> &[usize] {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => super::ops::to_density(p),
            State::Mixed(m) => m.clone(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

/// A split of subsystem indices `0..n` into two nonempty sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// `side_a` may be unsorted; duplicates and out-of-range indices are errors.
    pub fn new(side_a: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for i in side_a {
            if i >= n {
                return Err(Error::arg(format!("subsystem {i} out of range for {n} subsystems")));
            }
            if !seen.insert(i) {
                return Err(Error::arg(format!("subsystem {i} listed twice")));
            }
        }
        let side_a: Vec<usize> = seen.into_iter().collect();
        let side_b: Vec<usize> = (0..n).filter(|i| side_a.binary_search(i).is_err()).collect();
        if side_a.is_empty() || side_b.is_empty() {
            return Err(Error::arg("both sides of a bipartition must be nonempty"));
        }
        Ok(Self { side_a, side_b })
    }

    /// `focus | everything else`.
    pub fn one_vs_rest(focus: usize, n: usize) -> Result<Self> {
        Self::new([focus], n)
    }

    /// Parses `"0|12"` (one digit per subsystem) or `"0,1|2,10"` (comma lists).
    /// Both sides must be given and together cover `0..n` exactly.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (a, b) = text
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("cut '{text}' has no '|'")))?;
        let side_a = parse_side(a)?;
        let side_b = parse_side(b)?;
        let cut = Self::new(side_a, n)?;
        let mut b_sorted = side_b;
        b_sorted.sort_unstable();
        if b_sorted != cut.side_b {
            return Err(Error::Parse(format!(
                "cut '{text}' does not split subsystems 0..{n} into complementary sides"
            )));
        }
        Ok(cut)
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn num_subsystems(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    pub fn swapped(&self) -> Self {
        Self { side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.num_subsystems() != dims.len() {
            return Err(Error::dims(format!(
                "cut {} covers {} subsystems, state has {}",
                self,
                self.num_subsystems(),
                dims.len()
            )));
        }
        Ok(())
    }

    /// Product of the side-A dimensions.
    pub fn dim_a(&self, dims: &[usize]) -> usize {
        self.side_a.iter().map(|&i| dims[i]).product()
    }

    pub fn dim_b(&self, dims: &[usize]) -> usize {
        self.side_b.iter().map(|&i| dims[i]).product()
    }
}

fn parse_side(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty side in cut".into()));
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("'{t}': {e}"))))
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("'{c}' is not a subsystem digit")))
            })
            .collect()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |side: &[usize]| -> String {
            if self.num_subsystems() <= 10 {
                side.iter().map(|i| i.to_string()).collect()
            } else {
                side.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

/// Squared Schmidt coefficients, descending, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn new(mut coefficients: Vec<f64>) -> Result<Self> {
        let tol = policy::current().structural;
        if let Some(&bad) = coefficients.iter().find(|&&c| !(c >= -tol)) {
            return Err(Error::arg(format!("negative Schmidt coefficient {bad:.3e}")));
        }
        for c in coefficients.iter_mut() {
            *c = c.max(0.0);
        }
        let sum: f64 = coefficients.iter().sum();
        if !((sum - 1.0).abs() <= tol) {
            return Err(Error::arg(format!("Schmidt coefficients sum to {sum:.12}")));
        }
        coefficients.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Σ λᵢ², the purity of either reduced state.
    pub fn purity(&self) -> f64 {
        self.coefficients.iter().map(|l| l * l).sum()
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > tol).count()
    }
}
