//! Canonical and random state constructors.
//!
//! Random factories take an explicit seed; the same seed always yields the same
//! state. The generator is ChaCha8, seeded through `seed_from_u64`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::{CMatrix, CVector, DensityMatrix, PureState};
use crate::error::{Error, Result};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child seed for item `index` of a batch (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn one(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<PureState> {
    let total: usize = dims.iter().product();
    if index >= total {
        return Err(Error::arg(format!("basis index {index} out of range for dimension {total}")));
    }
    let mut v = CVector::zeros(total);
    v[index] = one(1.0);
    PureState::new(dims, v)
}

/// (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> PureState {
    ghz_state(2).expect("n = 2 is valid")
}

pub fn ghz_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::arg(format!("GHZ state needs n >= 2, got {n}")));
    }
    let total = 1usize << n;
    let mut v = CVector::zeros(total);
    let h = one(std::f64::consts::FRAC_1_SQRT_2);
    v[0] = h;
    v[total - 1] = h;
    PureState::normalized(vec![2; n], v)
}

/// Equal superposition of all weight-one basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::arg(format!("W state needs n >= 2, got {n}")));
    }
    let mut v = CVector::zeros(1usize << n);
    let a = one(1.0 / (n as f64).sqrt());
    for k in 0..n {
        v[1usize << k] = a;
    }
    PureState::normalized(vec![2; n], v)
}

/// p |Φ+⟩⟨Φ+| + (1 − p) I/4.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("Werner weight {p} outside [0, 1]")));
    }
    let bell = bell_state();
    let a = bell.amplitudes();
    let m = (a * a.adjoint()) * one(p) + CMatrix::identity(4, 4) * one((1.0 - p) / 4.0);
    DensityMatrix::new(vec![2, 2], m)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    // column-major fill keeps the draw order independent of nalgebra internals
    let mut m = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-random state drawn from `rng`.
pub fn random_pure_state_with(dims: &[usize], rng: &mut impl Rng) -> Result<PureState> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total == 0 {
        return Err(Error::arg("random state needs nonempty positive dims"));
    }
    let v = CVector::from_iterator(total, (0..total).map(|_| gaussian(rng)));
    PureState::normalized(dims.to_vec(), v)
}

/// Haar-random state: normalized i.i.d. complex Gaussian vector.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<PureState> {
    random_pure_state_with(dims, &mut rng_from_seed(seed))
}

/// Induced-measure mixed state: partial trace of a Haar-random purification
/// with a `rank`-dimensional ancilla.
pub fn random_mixed_state_with(dims: &[usize], rank: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if rank == 0 || rank > total {
        return Err(Error::arg(format!("rank {rank} outside 1..={total}")));
    }
    let mut full = dims.to_vec();
    full.push(rank);
    let purification = random_pure_state_with(&full, rng)?;
    // ancilla is the least significant subsystem, so the reshape is a plain row-major split
    let m = CMatrix::from_row_slice(total, rank, purification.amplitudes().as_slice());
    let rho = &m * m.adjoint();
    DensityMatrix::normalized(dims.to_vec(), rho)
}

pub fn random_mixed_state(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_state_with(dims, rank, &mut rng_from_seed(seed))
}

/// Haar-random `d × d` unitary (QR of a Ginibre matrix with the phase correction).
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { one(1.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// First `cols` columns of a Haar unitary: a `rows × cols` matrix with orthonormal columns.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    random_unitary(rows, rng).columns(0, cols).into_owned()
}
