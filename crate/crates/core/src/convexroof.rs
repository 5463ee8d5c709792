//! Convex-roof minimization of Σ pᵢ M(ψᵢ) over pure-state decompositions.
//!
//! Every K-member decomposition of a rank-r state ρ = Σ μᵢ |eᵢ⟩⟨eᵢ| has the form
//! |ψ̃ⱼ⟩ = Σᵢ Vⱼᵢ √μᵢ |eᵢ⟩ for a K×r matrix V with orthonormal columns. The search
//! runs over such isometries with pairwise complex Givens rotations
//!
//! ```text
//! row_a ← cos θ · row_a − e^{iφ} sin θ · row_b
//! row_b ← e^{−iφ} sin θ · row_a + cos θ · row_b
//! ```
//!
//! choosing (θ, φ) by a coarse scan followed by golden-section refinement, and
//! re-orthonormalizing V after each sweep over all pairs. A rotation is applied
//! only if it lowers the objective, so each restart descends monotonically and
//! the result is always an upper bound on the true roof.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ops::split_index_map;
use crate::linalg::{
    derive_seed, hermitian_eigenvalues, hermitian_eigh, random_isometry, rng_from_seed,
    Bipartition, CMatrix, CVector, DensityMatrix, PureState,
};
use crate::measures::{concurrence_two_qubit, MeasureId};
use crate::policy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoofConfig {
    /// Number of ensemble members K. `None` picks min(2r, r + 2) for a rank-r state.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Maximum number of sweeps per restart.
    pub max_iterations: usize,
    /// Relative objective decrease below which a sweep counts as stalled.
    pub tolerance: f64,
    pub seed: u64,
    /// Consecutive stalled sweeps that end a restart as converged.
    pub stall_sweeps: usize,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 20,
            max_iterations: 2000,
            tolerance: 1e-9,
            seed: 0,
            stall_sweeps: 50,
        }
    }
}

impl RoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.stall_sweeps == 0 {
            return Err(Error::arg("restarts, max_iterations and stall_sweeps must be positive"));
        }
        if self.ensemble_size == Some(0) {
            return Err(Error::arg("ensemble_size must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::arg(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn ensemble_size_for(&self, rank: usize) -> usize {
        self.ensemble_size.unwrap_or_else(|| (2 * rank).min(rank + 2))
    }
}

/// A finite pure-state decomposition of `realized_state`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
    realized_state: DensityMatrix,
}

impl Ensemble {
    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn realized_state(&self) -> &DensityMatrix {
        &self.realized_state
    }

    /// Σ pᵢ |ψᵢ⟩⟨ψᵢ|.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.realized_state.dim();
        self.members.iter().fold(CMatrix::zeros(d, d), |acc, (p, psi)| {
            let a = psi.amplitudes();
            acc + (a * a.adjoint()) * Complex64::new(*p, 0.0)
        })
    }

    /// Checks p ≥ 0, Σp = 1 and the reconstruction against `realized_state`.
    pub fn validate(&self) -> Result<()> {
        if let Some((p, _)) = self.members.iter().find(|(p, _)| *p < 0.0) {
            return Err(Error::arg(format!("negative ensemble weight {p}")));
        }
        let total: f64 = self.members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::arg(format!("ensemble weights sum to {total:.12}")));
        }
        let diff = (self.reconstruct() - self.realized_state.matrix()).camax();
        if diff > 1e-8 {
            return Err(Error::arg(format!("ensemble reconstructs the state only to {diff:.3e}")));
        }
        Ok(())
    }

    /// Σ pᵢ f(ψᵢ).
    pub fn average(&self, mut f: impl FnMut(&PureState) -> Result<f64>) -> Result<f64> {
        self.members.iter().try_fold(0.0, |acc, (p, psi)| Ok(acc + p * f(psi)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofResult {
    /// Best objective over all restarts; an upper bound on the convex roof.
    pub value: f64,
    pub best_ensemble: Ensemble,
    /// Whether the restart that produced `value` met the stopping rule.
    pub converged: bool,
    pub best_restart: usize,
    /// Per restart: the initial objective followed by the objective after each sweep.
    pub objective_history: Vec<Vec<f64>>,
}

/// Scaled eigenvectors √μᵢ |eᵢ⟩ (as columns) for eigenvalues above the rank threshold.
fn eigen_frame(rho: &DensityMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigh(rho.matrix());
    let tol = policy::current().rank;
    let cols: Vec<CVector> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > tol)
        .map(|(i, &v)| vectors.column(i) * Complex64::new(v.sqrt(), 0.0))
        .collect();
    CMatrix::from_columns(&cols)
}

fn members_from_frame(frame: &CMatrix, v: &CMatrix) -> Vec<Vec<Complex64>> {
    // column j of frame · Vᵀ
    let psi = frame * v.transpose();
    (0..psi.ncols()).map(|j| psi.column(j).iter().copied().collect()).collect()
}

fn ensemble_from_members(rho: &DensityMatrix, members: &[Vec<Complex64>]) -> Result<Ensemble> {
    let dims = rho.dims().to_vec();
    let mut out = Vec::with_capacity(members.len());
    for m in members {
        let v = CVector::from_column_slice(m);
        let p = v.norm_squared();
        if p > 0.0 {
            out.push((p, PureState::normalized(dims.clone(), v)?));
        }
    }
    Ok(Ensemble { members: out, realized_state: rho.clone() })
}

/// Builds the decomposition induced by the isometry `v` (K × r, orthonormal columns,
/// r the numerical rank of `rho`). Zero-weight members are dropped.
pub fn decompositions_from_isometry(rho: &DensityMatrix, v: &CMatrix) -> Result<Ensemble> {
    let frame = eigen_frame(rho);
    let r = frame.ncols();
    if v.ncols() != r {
        return Err(Error::dims(format!("isometry has {} columns, state has rank {r}", v.ncols())));
    }
    let gram_dev = (v.adjoint() * v - CMatrix::identity(r, r)).camax();
    if gram_dev > 1e-10 {
        return Err(Error::arg(format!("matrix is not an isometry (V†V − I up to {gram_dev:.3e})")));
    }
    ensemble_from_members(rho, &members_from_frame(&frame, v))
}

/// p · M(ψ/‖ψ‖) for unnormalized ψ, with the reduced state taken on the smaller side.
struct PureObjective {
    measure: MeasureId,
    small_dim: usize,
    other_dim: usize,
    /// `layout[s * other_dim + o]` is the full index with small-side index s, other-side index o.
    layout: Vec<usize>,
}

impl PureObjective {
    fn new(dims: &[usize], cut: &Bipartition, measure: MeasureId) -> Result<Self> {
        if !matches!(measure, MeasureId::Concurrence | MeasureId::Negativity) {
            return Err(Error::unsupported(format!(
                "convex roof of {measure}; only concurrence and negativity are supported"
            )));
        }
        let (da, db) = (cut.dim_a(dims), cut.dim_b(dims));
        let (small, small_dim, other_dim) =
            if da <= db { (cut.side_a(), da, db) } else { (cut.side_b(), db, da) };
        let mut layout = vec![0; da * db];
        for (full, (s, o)) in split_index_map(dims, small).into_iter().enumerate() {
            layout[s * other_dim + o] = full;
        }
        Ok(Self { measure, small_dim, other_dim, layout })
    }

    fn reduced(&self, psi: &[Complex64]) -> CMatrix {
        let (ds, dn) = (self.small_dim, self.other_dim);
        let mut sigma = CMatrix::zeros(ds, ds);
        for i in 0..ds {
            for j in i..ds {
                let mut acc = Complex64::new(0.0, 0.0);
                for o in 0..dn {
                    acc += psi[self.layout[i * dn + o]] * psi[self.layout[j * dn + o]].conj();
                }
                sigma[(i, j)] = acc;
                sigma[(j, i)] = acc.conj();
            }
        }
        sigma
    }

    /// Σ over 2×2 minors of the reshaped amplitude matrix of |minor|². By Cauchy–Binet
    /// this is the second elementary symmetric polynomial of σ = M M†, computed
    /// without the cancellation in p² − Tr σ².
    fn minor_sum(&self, psi: &[Complex64]) -> f64 {
        let (ds, dn) = (self.small_dim, self.other_dim);
        let at = |s: usize, o: usize| psi[self.layout[s * dn + o]];
        let mut acc = 0.0;
        for a in 0..ds {
            for b in a + 1..ds {
                for i in 0..dn {
                    for j in i + 1..dn {
                        acc += (at(a, i) * at(b, j) - at(a, j) * at(b, i)).norm_sqr();
                    }
                }
            }
        }
        acc
    }

    fn eval(&self, psi: &[Complex64]) -> f64 {
        match self.measure {
            // p·C = √(2(p² − Tr σ²)) = 2 √(Σ |minors|²)
            MeasureId::Concurrence => 2.0 * self.minor_sum(psi).sqrt(),
            // p·N = (Σ √sᵢ)² − p over the eigenvalues sᵢ of σ
            _ => {
                if self.small_dim == 2 {
                    // two eigenvalues: (√s₁ + √s₂)² − (s₁ + s₂) = 2√(det σ), det σ = Σ |minors|²
                    2.0 * self.minor_sum(psi).sqrt()
                } else {
                    let sigma = self.reduced(psi);
                    let p = sigma.trace().re;
                    let s: f64 = hermitian_eigenvalues(&sigma).iter().map(|v| v.max(0.0).sqrt()).sum();
                    (s * s - p).max(0.0)
                }
            }
        }
    }
}

fn rotate(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut na = vec![Complex64::new(0.0, 0.0); a.len()];
    let mut nb = na.clone();
    rotate_into(a, b, theta, phi, &mut na, &mut nb);
    (na, nb)
}

fn rotate_into(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64, na: &mut [Complex64], nb: &mut [Complex64]) {
    let (s, c) = theta.sin_cos();
    let es = Complex64::from_polar(s, phi);
    let esc = es.conj();
    for i in 0..a.len() {
        na[i] = a[i] * c - es * b[i];
        nb[i] = esc * a[i] + b[i] * c;
    }
}

const GRID: usize = 12;
const GOLDEN_TOL: f64 = 1e-7;

/// Minimizes `f` on [lo, hi]: uniform scan, then golden section around the best grid point.
fn line_search(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let step = (hi - lo) / GRID as f64;
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..=GRID {
        let x = lo + step * i as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        lo + step * best_i.saturating_sub(1) as f64,
        lo + step * (best_i + 1).min(GRID) as f64,
    );
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > GOLDEN_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

struct Restart {
    value: f64,
    v: CMatrix,
    members: Vec<Vec<Complex64>>,
    converged: bool,
    history: Vec<f64>,
}

fn orthonormalize(v: &CMatrix) -> CMatrix {
    let qr = v.clone().qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn run_restart(frame: &CMatrix, objective: &PureObjective, v0: CMatrix, cfg: &RoofConfig, phases: bool) -> Restart {
    let k = v0.nrows();
    let mut v = v0;
    let mut members = members_from_frame(frame, &v);
    let mut values: Vec<f64> = members.iter().map(|m| objective.eval(m)).collect();
    let mut total: f64 = values.iter().sum();
    let mut history = vec![total];
    let mut stalled = 0;
    let mut converged = false;
    let dim = frame.nrows();
    let (mut buf_a, mut buf_b) = (vec![Complex64::new(0.0, 0.0); dim], vec![Complex64::new(0.0, 0.0); dim]);

    for _ in 0..cfg.max_iterations {
        if total <= 1e-14 {
            converged = true;
            break;
        }
        let before = total;
        let snapshot = (v.clone(), members.clone(), values.clone());
        for a in 0..k {
            for b in a + 1..k {
                let base = values[a] + values[b];
                let (ma, mb) = (&members[a], &members[b]);
                let mut pair = |theta: f64, phi: f64| {
                    rotate_into(ma, mb, theta, phi, &mut buf_a, &mut buf_b);
                    objective.eval(&buf_a) + objective.eval(&buf_b)
                };
                let mut best = (0.0, 0.0, base);
                let starts: &[f64] = if phases { &[0.0, FRAC_PI_2] } else { &[0.0] };
                for &phi0 in starts {
                    let (t, val) = line_search(-FRAC_PI_2, FRAC_PI_2, |t| pair(t, phi0));
                    if val < best.2 {
                        best = (t, phi0, val);
                    }
                }
                if phases {
                    let (p, val) = line_search(-PI, PI, |p| pair(best.0, p));
                    if val < best.2 {
                        best = (best.0, p, val);
                    }
                    let (t, val) = line_search(-FRAC_PI_2, FRAC_PI_2, |t| pair(t, best.1));
                    if val < best.2 {
                        best = (t, best.1, val);
                    }
                }
                let (theta, phi, val) = best;
                if val < base {
                    let (na, nb) = rotate(&members[a], &members[b], theta, phi);
                    values[a] = objective.eval(&na);
                    values[b] = objective.eval(&nb);
                    members[a] = na;
                    members[b] = nb;
                    let row_a: Vec<Complex64> = v.row(a).iter().copied().collect();
                    let row_b: Vec<Complex64> = v.row(b).iter().copied().collect();
                    let (ra, rb) = rotate(&row_a, &row_b, theta, phi);
                    for j in 0..v.ncols() {
                        v[(a, j)] = ra[j];
                        v[(b, j)] = rb[j];
                    }
                }
            }
        }
        v = orthonormalize(&v);
        members = members_from_frame(frame, &v);
        values = members.iter().map(|m| objective.eval(m)).collect();
        total = values.iter().sum();
        // roundoff from re-orthonormalization must not undo a stalled sweep
        if total > before {
            (v, members, values) = snapshot;
            total = before;
        }
        history.push(total);

        let decrease = (before - total) / before.max(f64::MIN_POSITIVE);
        if decrease < cfg.tolerance {
            stalled += 1;
            if stalled >= cfg.stall_sweeps {
                converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    Restart { value: total, v, members, converged, history }
}

/// Upper bound on min Σ pᵢ M(ψᵢ) over decompositions of `rho`, for
/// M ∈ {concurrence, negativity} across `cut`.
///
/// Restart 0 starts from the eigen-decomposition; the others from Haar-random
/// isometries seeded by `derive_seed(cfg.seed, restart)`. Restarts run in
/// parallel and the lowest value wins (ties go to the lower restart index).
pub fn convex_roof(rho: &DensityMatrix, cut: &Bipartition, measure: MeasureId, cfg: &RoofConfig) -> Result<RoofResult> {
    roof_search(rho, cut, measure, cfg, true)
}

/// `phases = false` restricts the search to real rotations (φ = 0).
fn roof_search(rho: &DensityMatrix, cut: &Bipartition, measure: MeasureId, cfg: &RoofConfig, phases: bool) -> Result<RoofResult> {
    cfg.validate()?;
    cut.check_dims(rho.dims())?;
    let objective = PureObjective::new(rho.dims(), cut, measure)?;
    let frame = eigen_frame(rho);
    let rank = frame.ncols();
    if rank == 0 {
        return Err(Error::InvalidDensity("state has no eigenvalue above the rank threshold".into()));
    }
    let k = cfg.ensemble_size_for(rank);
    if k < rank {
        return Err(Error::arg(format!("ensemble_size {k} is below the state rank {rank}")));
    }

    let mut eigen_start = CMatrix::zeros(k, rank);
    for i in 0..rank {
        eigen_start[(i, i)] = Complex64::new(1.0, 0.0);
    }

    let restarts: Vec<Restart> = if rank == 1 {
        // every decomposition of a pure state is the state itself
        let members = members_from_frame(&frame, &eigen_start);
        let value = members.iter().map(|m| objective.eval(m)).sum();
        vec![Restart { value, v: eigen_start, members, converged: true, history: vec![value] }]
    } else {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|i| {
                let v0 = if i == 0 {
                    eigen_start.clone()
                } else {
                    random_isometry(k, rank, &mut rng_from_seed(derive_seed(cfg.seed, i as u64)))
                };
                run_restart(&frame, &objective, v0, cfg, phases)
            })
            .collect()
    };

    let best_restart = restarts
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best = &restarts[best_restart];
    debug_assert!((best.v.adjoint() * &best.v - CMatrix::identity(rank, rank)).camax() < 1e-10);
    Ok(RoofResult {
        value: best.value,
        best_ensemble: ensemble_from_members(rho, &best.members)?,
        converged: best.converged,
        best_restart,
        objective_history: restarts.iter().map(|r| r.history.clone()).collect(),
    })
}

/// Optimizer concurrence minus the analytic two-qubit concurrence. Nonnegative up
/// to roundoff, since the optimizer only ever returns upper bounds.
pub fn roof_certificate_gap(rho: &DensityMatrix, cut: &Bipartition, cfg: &RoofConfig) -> Result<f64> {
    if !rho.is_two_qubit() {
        return Err(Error::dims(format!("certificate gap needs a two-qubit state, got {:?}", rho.dims())));
    }
    let roof = convex_roof(rho, cut, MeasureId::Concurrence, cfg)?;
    Ok(roof.value - concurrence_two_qubit(rho)?.value)
}
