//! Tensor-structure operations on states and matrices.
//!
//! All index arithmetic is big-endian. For dims `[2, 3, 2]` the strides are
//! `[6, 2, 1]`, so basis index 9 decomposes as `9 = 1·6 + 1·2 + 1·1`, i.e.
//! digits `(1, 1, 1)`. Keeping subsystems `{0, 2}` maps that index to
//! `1·2 + 1 = 3` on the kept side and `1` on the traced side.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::state::{
    hermiticity_deviation, Bipartition, CMatrix, CVector, DensityMatrix, PureState,
    SchmidtSpectrum,
};
use crate::error::{Error, Result};
use crate::policy;

/// Digits of `index` in the mixed radix given by `dims`.
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// For every full basis index, its index restricted to `side` and to the complement.
/// Both restricted indices are big-endian over the subsystems in ascending order.
pub(crate) fn split_index_map(dims: &[usize], side: &[usize]) -> Vec<(usize, usize)> {
    let total: usize = dims.iter().product();
    let in_side: Vec<bool> = (0..dims.len()).map(|i| side.contains(&i)).collect();
    (0..total)
        .map(|idx| {
            let ds = digits(idx, dims);
            let (mut a, mut b) = (0usize, 0usize);
            for (k, &digit) in ds.iter().enumerate() {
                if in_side[k] {
                    a = a * dims[k] + digit;
                } else {
                    b = b * dims[k] + digit;
                }
            }
            (a, b)
        })
        .collect()
}

fn check_subsystems(set: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&i| i >= n) {
        return Err(Error::arg(format!("subsystem {bad} out of range for {n} subsystems")));
    }
    Ok(v)
}

pub fn tensor_product(a: &PureState, b: &PureState) -> PureState {
    let amplitudes = a.amplitudes().kronecker(b.amplitudes());
    let dims = [a.dims(), b.dims()].concat();
    PureState::normalized(dims, amplitudes).expect("product of unit vectors is a unit vector")
}

pub fn tensor_product_mixed(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let m = a.matrix().kronecker(b.matrix());
    DensityMatrix::from_parts([a.dims(), b.dims()].concat(), m)
}

/// |ψ⟩⟨ψ|.
pub fn to_density(psi: &PureState) -> DensityMatrix {
    let a = psi.amplitudes();
    DensityMatrix::from_parts(psi.dims().to_vec(), a * a.adjoint())
}

/// Reduced state on `keep` (ascending order). `keep` must be nonempty.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let keep = check_subsystems(keep, dims.len())?;
    if keep.is_empty() {
        return Err(Error::arg("partial_trace needs at least one kept subsystem"));
    }
    let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dr = rho.dim() / dk;
    // Group full indices by their traced-out part.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(dk); dr];
    for (full, (a, b)) in split_index_map(dims, &keep).into_iter().enumerate() {
        groups[b].push((a, full));
    }
    let m = rho.matrix();
    let mut out = CMatrix::zeros(dk, dk);
    for group in &groups {
        for &(ai, fi) in group {
            for &(aj, fj) in group {
                out[(ai, aj)] += m[(fi, fj)];
            }
        }
    }
    Ok(DensityMatrix::from_parts(kept_dims, out))
}

/// Amplitudes reshaped into a `dim(side_a) × dim(side_b)` matrix.
pub fn amplitude_matrix(psi: &PureState, side_a: &[usize]) -> Result<CMatrix> {
    let dims = psi.dims();
    let side = check_subsystems(side_a, dims.len())?;
    let da: usize = side.iter().map(|&i| dims[i]).product();
    let db = psi.dim() / da;
    let mut m = CMatrix::zeros(da, db);
    for (full, (a, b)) in split_index_map(dims, &side).into_iter().enumerate() {
        m[(a, b)] = psi.amplitudes()[full];
    }
    Ok(m)
}

/// Reduced state of a pure state on `keep`, computed as M M† from the reshaped amplitudes.
pub fn reduced_density(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = check_subsystems(keep, psi.num_subsystems())?;
    if keep.is_empty() {
        return Err(Error::arg("reduced_density needs at least one kept subsystem"));
    }
    let m = amplitude_matrix(psi, &keep)?;
    let dims = keep.iter().map(|&i| psi.dims()[i]).collect();
    Ok(DensityMatrix::from_parts(dims, &m * m.adjoint()))
}

/// Partial transpose of an arbitrary square matrix over subsystems `set`.
pub fn partial_transpose_matrix(m: &CMatrix, dims: &[usize], set: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.nrows() != total {
        return Err(Error::dims(format!(
            "{}x{} matrix for total dimension {}",
            m.nrows(),
            m.ncols(),
            total
        )));
    }
    let set = check_subsystems(set, dims.len())?;
    let strides: Vec<usize> = (0..dims.len()).map(|k| dims[k + 1..].iter().product()).collect();
    let all_digits: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
    let mut out = CMatrix::zeros(total, total);
    for i in 0..total {
        for j in 0..total {
            let (mut ii, mut jj) = (i, j);
            for &k in &set {
                let (di, dj) = (all_digits[i][k], all_digits[j][k]);
                // swap digit k between row and column
                ii = ii - di * strides[k] + dj * strides[k];
                jj = jj - dj * strides[k] + di * strides[k];
            }
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// ρ^{T_S}. Hermitian and trace-preserving, but generally not positive.
pub fn partial_transpose(rho: &DensityMatrix, transpose_set: &[usize]) -> Result<CMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.dims(), transpose_set)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending with matching columns.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<CVector>>(),
    );
    (values, vectors)
}

/// Principal square root of a positive-semidefinite Hermitian matrix; tiny negative
/// eigenvalues from roundoff are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let eig = SymmetricEigen::new(m.clone());
    let roots = eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0));
    let u = &eig.eigenvectors;
    u * CMatrix::from_diagonal(&roots) * u.adjoint()
}

/// Sum of singular values. Hermitian input (within the structural tolerance)
/// goes through the eigensolver; anything else through the SVD.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::arg(format!("trace norm of a non-square {}x{} matrix", m.nrows(), m.ncols())));
    }
    if hermiticity_deviation(m) <= policy::current().structural {
        Ok(hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum())
    } else {
        Ok(m.clone().svd(false, false).singular_values.iter().sum())
    }
}

pub fn schmidt_coefficients(psi: &PureState, cut: &Bipartition) -> Result<SchmidtSpectrum> {
    cut.check_dims(psi.dims())?;
    let m = amplitude_matrix(psi, cut.side_a())?;
    let sv = m.svd(false, false).singular_values;
    SchmidtSpectrum::new(sv.iter().map(|s| s * s).collect())
}

/// Applies a single-subsystem unitary `u` to subsystem `target`.
pub fn apply_local_unitary(psi: &PureState, target: usize, u: &CMatrix) -> Result<PureState> {
    let dims = psi.dims();
    if target >= dims.len() {
        return Err(Error::arg(format!("subsystem {target} out of range")));
    }
    let d = dims[target];
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::dims(format!("{}x{} operator on a {d}-level subsystem", u.nrows(), u.ncols())));
    }
    let stride: usize = dims[target + 1..].iter().product();
    let amps = psi.amplitudes();
    let mut out = CVector::zeros(amps.len());
    for idx in 0..amps.len() {
        let digit = (idx / stride) % d;
        let base = idx - digit * stride;
        out[idx] = (0..d).map(|e| u[(digit, e)] * amps[base + e * stride]).sum();
    }
    PureState::normalized(dims.to_vec(), out)
}
