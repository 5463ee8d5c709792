//! Concurrence, negativity, convex-roof extended negativity and entanglement
//! of formation, on the state classes where each is exactly computable.
//!
//! Negativity uses the unnormalized convention ‖ρ^{T_A}‖ − 1, under which a
//! two-qubit maximally entangled state has negativity 1. The halved form is
//! available through [`MeasureValue::halved_negativity`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convexroof::{convex_roof, RoofConfig};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermitian_eigh, partial_transpose, psd_sqrt, schmidt_coefficients, to_density,
    trace_norm, Bipartition, CMatrix, DensityMatrix, PureState, State,
};
use crate::policy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureId {
    Concurrence,
    Negativity,
    Cren,
    Eof,
}

impl MeasureId {
    pub const ALL: [MeasureId; 4] =
        [MeasureId::Concurrence, MeasureId::Negativity, MeasureId::Cren, MeasureId::Eof];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureId::Concurrence => "concurrence",
            MeasureId::Negativity => "negativity",
            MeasureId::Cren => "cren",
            MeasureId::Eof => "eof",
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "concurrence" | "c" => Ok(MeasureId::Concurrence),
            "negativity" | "n" => Ok(MeasureId::Negativity),
            "cren" => Ok(MeasureId::Cren),
            "eof" | "e" => Ok(MeasureId::Eof),
            other => Err(Error::Parse(format!("unknown measure '{other}'"))),
        }
    }
}

/// A measure evaluation. `exact` is false when the value came from the
/// convex-roof optimizer, in which case it is an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: MeasureId,
    pub exact: bool,
}

impl MeasureValue {
    /// Clamps roundoff negatives to zero; anything further below zero is an error.
    pub(crate) fn checked(value: f64, measure: MeasureId, exact: bool) -> Result<Self> {
        let value = clamp_nonnegative(value, measure.as_str())?;
        Ok(Self { value, measure, exact })
    }

    /// (‖ρ^{T_A}‖ − 1)/2, for negativity values only.
    pub fn halved_negativity(&self) -> Option<f64> {
        (self.measure == MeasureId::Negativity).then_some(self.value / 2.0)
    }

    fn relabel(self, measure: MeasureId) -> Self {
        Self { measure, ..self }
    }
}

pub(crate) fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -policy::current().clamp {
        Ok(0.0)
    } else {
        Err(Error::NumericalIntegrity { what: what.to_string(), value })
    }
}

/// ‖ρ^{T_A}‖ − 1 with the transpose taken on `cut.side_a`.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<MeasureValue> {
    cut.check_dims(rho.dims())?;
    let pt = partial_transpose(rho, cut.side_a())?;
    MeasureValue::checked(trace_norm(&pt)? - 1.0, MeasureId::Negativity, true)
}

/// √(2(1 − Tr ρ_A²)) from the Schmidt spectrum λ, evaluated as √(4 Σ_{i<j} λᵢλⱼ)
/// so that near-product states do not lose half their digits to cancellation.
pub fn concurrence_pure(psi: &PureState, cut: &Bipartition) -> Result<MeasureValue> {
    let spectrum = schmidt_coefficients(psi, cut)?;
    // descending λ: accumulate the suffix sums from the small end
    let mut pairs = 0.0;
    let mut suffix = 0.0;
    for &x in spectrum.coefficients().iter().rev() {
        pairs += x * suffix;
        suffix += x;
    }
    MeasureValue::checked((4.0 * pairs).sqrt(), MeasureId::Concurrence, true)
}

fn pauli_yy() -> CMatrix {
    // σ_y ⊗ σ_y is real: anti-diagonal (-1, 1, 1, -1)
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::dims(format!("expected a two-qubit state, got dims {:?}", rho.dims())))
    }
}

/// ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y).
pub fn spin_flip(rho: &DensityMatrix) -> Result<CMatrix> {
    require_two_qubit(rho)?;
    let yy = pauli_yy();
    Ok(&yy * rho.matrix().conjugate() * &yy)
}

/// Two-qubit concurrence max(0, μ₁ − μ₂ − μ₃ − μ₄), where μᵢ² are the eigenvalues
/// of ρρ̃.
///
/// With ρ = W W† (W the eigenvectors scaled by √λ), the μᵢ are the singular values
/// of the symmetric matrix τ = W† (σ_y⊗σ_y) W̄. This avoids square roots of
/// eigenvalues that are zero up to roundoff, which would cost eight digits on
/// rank-deficient inputs.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<MeasureValue> {
    require_two_qubit(rho)?;
    let (values, vectors) = hermitian_eigh(rho.matrix());
    let mut w = vectors;
    for (j, v) in values.iter().enumerate() {
        let s = Complex64::new(v.max(0.0).sqrt(), 0.0);
        for i in 0..4 {
            w[(i, j)] *= s;
        }
    }
    let tau = w.adjoint() * pauli_yy() * w.conjugate();
    let mut mu: Vec<f64> = tau.svd(false, false).singular_values.iter().copied().collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    MeasureValue::checked(c.max(0.0), MeasureId::Concurrence, true)
}

/// Same quantity through the Hermitian form √ρ ρ̃ √ρ; accurate only to about
/// 1e-8 on rank-deficient states. Kept as an independent cross-check.
pub fn concurrence_two_qubit_sqrt_route(rho: &DensityMatrix) -> Result<f64> {
    let flipped = spin_flip(rho)?;
    let root = psd_sqrt(rho.matrix());
    let r = &root * flipped * &root;
    let r = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let mut mu: Vec<f64> = hermitian_eigenvalues(&r).into_iter().map(|v| v.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// −x log₂ x − (1−x) log₂(1−x), with h(0) = h(1) = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(Error::arg(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(xlog2x_neg(x) + xlog2x_neg(1.0 - x))
}

fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// h((1 + √(1 − C²))/2).
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::arg(format!("concurrence {c} outside [0, 1]")));
    }
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

fn check_ebit_bound(value: f64, dims: &[usize], cut: Option<&Bipartition>) -> Result<()> {
    let min_dim = match cut {
        Some(c) => c.dim_a(dims).min(c.dim_b(dims)),
        None => 2,
    };
    let bound = (min_dim as f64).log2();
    if value > bound + policy::current().clamp {
        return Err(Error::NumericalIntegrity { what: format!("eof above log2({min_dim})"), value });
    }
    Ok(())
}

pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<MeasureValue> {
    let c = concurrence_two_qubit(rho)?.value;
    let e = eof_from_concurrence(c)?;
    check_ebit_bound(e, rho.dims(), None)?;
    MeasureValue::checked(e, MeasureId::Eof, true)
}

/// Entropy of entanglement: base-2 Shannon entropy of the Schmidt spectrum.
pub fn eof_pure(psi: &PureState, cut: &Bipartition) -> Result<MeasureValue> {
    let spectrum = schmidt_coefficients(psi, cut)?;
    let e: f64 = spectrum.coefficients().iter().map(|&l| xlog2x_neg(l)).sum();
    check_ebit_bound(e, psi.dims(), Some(cut))?;
    MeasureValue::checked(e, MeasureId::Eof, true)
}

fn is_qubit_vs_rest(dims: &[usize], cut: &Bipartition) -> bool {
    cut.dim_a(dims) == 2 || cut.dim_b(dims) == 2
}

/// Convex-roof extended negativity.
///
/// * pure input: equals the negativity;
/// * two-qubit mixed input: equals the two-qubit concurrence (exact);
/// * qubit-versus-rest mixed input: convex-roof concurrence from the optimizer
///   (`exact = false`, an upper bound); `roof` defaults to [`RoofConfig::default`];
/// * anything else has no route and is rejected.
pub fn cren(state: &State, cut: &Bipartition, roof: Option<&RoofConfig>) -> Result<MeasureValue> {
    cut.check_dims(state.dims())?;
    match state {
        State::Pure(psi) => Ok(negativity(&to_density(psi), cut)?.relabel(MeasureId::Cren)),
        State::Mixed(rho) if rho.is_two_qubit() => {
            Ok(concurrence_two_qubit(rho)?.relabel(MeasureId::Cren))
        }
        State::Mixed(rho) if is_qubit_vs_rest(rho.dims(), cut) => {
            let cfg = roof.cloned().unwrap_or_default();
            let result = convex_roof(rho, cut, MeasureId::Concurrence, &cfg)?;
            MeasureValue::checked(result.value, MeasureId::Cren, false)
        }
        State::Mixed(rho) => Err(Error::unsupported(format!(
            "cren of a mixed state across a {}x{} cut has no exact route",
            cut.dim_a(rho.dims()),
            cut.dim_b(rho.dims())
        ))),
    }
}

/// Evaluates `measure` on any state through the best available route.
///
/// Mixed concurrence beyond two qubits goes through the optimizer on
/// qubit-versus-rest cuts; mixed EoF is only available for two qubits.
pub fn evaluate(
    state: &State,
    measure: MeasureId,
    cut: &Bipartition,
    roof: Option<&RoofConfig>,
) -> Result<MeasureValue> {
    cut.check_dims(state.dims())?;
    match (measure, state) {
        (MeasureId::Negativity, s) => negativity(&s.to_density(), cut),
        (MeasureId::Cren, s) => cren(s, cut, roof),
        (MeasureId::Concurrence, State::Pure(p)) => concurrence_pure(p, cut),
        (MeasureId::Concurrence, State::Mixed(r)) if r.is_two_qubit() => concurrence_two_qubit(r),
        (MeasureId::Concurrence, State::Mixed(r)) if is_qubit_vs_rest(r.dims(), cut) => {
            let cfg = roof.cloned().unwrap_or_default();
            let result = convex_roof(r, cut, MeasureId::Concurrence, &cfg)?;
            MeasureValue::checked(result.value, MeasureId::Concurrence, false)
        }
        (MeasureId::Eof, State::Pure(p)) => eof_pure(p, cut),
        (MeasureId::Eof, State::Mixed(r)) if r.is_two_qubit() => eof_two_qubit(r),
        (m, State::Mixed(r)) => Err(Error::unsupported(format!(
            "{m} of a mixed state with dims {:?} across {cut} has no available route",
            r.dims()
        ))),
    }
}
