use super::{classify, AlphaExponent, ResidualBound, ResidualOptions, ResidualReport, RhsTerm};
use crate::convexroof::convex_roof;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigh, reduced_density, to_density, Bipartition, DensityMatrix, PureState};
use crate::measures::{
    concurrence_pure, concurrence_two_qubit, eof_pure, eof_two_qubit, negativity, MeasureId, MeasureValue,
};

/// Raw (un-exponentiated) terms of one residual.
struct Terms {
    lhs: MeasureValue,
    rhs: Vec<(Vec<usize>, MeasureValue)>,
    k: usize,
}

fn check_qubits(psi: &PureState, focus: usize) -> Result<usize> {
    let n = psi.num_subsystems();
    if !psi.is_qubits() {
        return Err(Error::arg(format!("monogamy checks need qubits, got dims {:?}", psi.dims())));
    }
    if n < 2 {
        return Err(Error::arg("monogamy checks need at least two qubits"));
    }
    if focus >= n {
        return Err(Error::arg(format!("focus {focus} out of range for {n} qubits")));
    }
    Ok(n)
}

/// M(ψ; focus | rest) through the exact pure-state route of each measure.
pub fn one_to_rest_measure(psi: &PureState, focus: usize, measure: MeasureId) -> Result<MeasureValue> {
    let cut = Bipartition::one_vs_rest(focus, psi.num_subsystems())?;
    let v = match measure {
        MeasureId::Negativity => negativity(&to_density(psi), &cut)?,
        MeasureId::Cren => {
            let v = negativity(&to_density(psi), &cut)?;
            MeasureValue { measure: MeasureId::Cren, ..v }
        }
        MeasureId::Concurrence => concurrence_pure(psi, &cut)?,
        MeasureId::Eof => eof_pure(psi, &cut)?,
    };
    Ok(v)
}

/// M on the two-qubit marginal `rho` (any ordering) across its single-qubit cut.
pub fn pairwise_measure(rho: &DensityMatrix, measure: MeasureId) -> Result<MeasureValue> {
    let cut = Bipartition::parse("0|1", 2)?;
    let v = match measure {
        MeasureId::Negativity => negativity(rho, &cut)?,
        MeasureId::Concurrence => concurrence_two_qubit(rho)?,
        MeasureId::Cren => MeasureValue { measure: MeasureId::Cren, ..concurrence_two_qubit(rho)? },
        MeasureId::Eof => eof_two_qubit(rho)?,
    };
    Ok(v)
}

fn pair_marginal(psi: &PureState, focus: usize, partner: usize) -> Result<DensityMatrix> {
    reduced_density(psi, &[focus, partner])
}

fn pairwise_terms(psi: &PureState, focus: usize, partners: &[usize], measure: MeasureId) -> Result<Vec<(Vec<usize>, MeasureValue)>> {
    partners
        .iter()
        .map(|&p| Ok((vec![p], pairwise_measure(&pair_marginal(psi, focus, p)?, measure)?)))
        .collect()
}

/// Tail term M(focus | tail) on the mixed marginal over {focus} ∪ tail.
fn tail_term(psi: &PureState, focus: usize, tail: &[usize], measure: MeasureId, opts: &ResidualOptions) -> Result<MeasureValue> {
    let mut keep: Vec<usize> = tail.to_vec();
    keep.push(focus);
    keep.sort_unstable();
    let marginal = reduced_density(psi, &keep)?;
    let focus_pos = keep.iter().position(|&q| q == focus).expect("focus kept");
    let cut = Bipartition::one_vs_rest(focus_pos, keep.len())?;
    let rank = marginal.numerical_rank();
    match measure {
        MeasureId::Negativity => negativity(&marginal, &cut),
        MeasureId::Concurrence | MeasureId::Cren => {
            let roof = convex_roof(&marginal, &cut, MeasureId::Concurrence, &opts.roof)?;
            Ok(MeasureValue { value: roof.value.max(0.0), measure, exact: rank == 1 })
        }
        MeasureId::Eof => {
            if rank != 1 {
                return Err(Error::unsupported(format!(
                    "EoF tail over {tail:?} is a rank-{rank} mixed state; only pure tails are supported"
                )));
            }
            let (_, vectors) = hermitian_eigh(marginal.matrix());
            let pure = PureState::normalized(marginal.dims().to_vec(), vectors.column(0).into_owned())?;
            eof_pure(&pure, &cut)
        }
    }
}

fn report(terms: &Terms, measure: MeasureId, alpha: f64, opts: &ResidualOptions) -> Result<ResidualReport> {
    let exponent = AlphaExponent::new(alpha, measure)?;
    let zero = opts.zero_threshold;
    let power = |m: f64| -> (f64, bool) {
        if m <= zero {
            (0.0, alpha < 0.0)
        } else {
            (m.powf(alpha), false)
        }
    };

    let (lhs, lhs_excluded) = power(terms.lhs.value);
    let rhs_terms: Vec<RhsTerm> = terms
        .rhs
        .iter()
        .map(|(partners, mv)| {
            let (value, excluded) = power(mv.value);
            RhsTerm { partners: partners.clone(), measure_value: mv.value, value, exact: mv.exact, excluded }
        })
        .collect();
    let exact = terms.lhs.exact && rhs_terms.iter().all(|t| t.exact);
    let bound = match (exact, alpha > 0.0) {
        (true, _) => ResidualBound::Exact,
        (false, true) => ResidualBound::LowerBound,
        (false, false) => ResidualBound::UpperBound,
    };
    let vacuous = lhs_excluded || rhs_terms.iter().any(|t| t.excluded);
    let residual = lhs - rhs_terms.iter().map(|t| t.value).sum::<f64>();
    let verdict = classify(residual, exponent.regime, opts.tolerance, bound, vacuous);

    let mut notes = Vec::new();
    if vacuous {
        notes.push("zero-valued term at alpha < 0: inequality holds trivially, 0^alpha not evaluated".into());
    }
    match bound {
        ResidualBound::LowerBound => notes.push(
            "tail term is an optimizer upper bound, so the reported residual is a lower bound on the true residual".into(),
        ),
        ResidualBound::UpperBound => notes.push(
            "tail term is an optimizer upper bound, so with alpha < 0 the reported residual is an upper bound".into(),
        ),
        ResidualBound::Exact => {}
    }
    if alpha < 0.0 {
        notes.push("strict polygamy is not numerically decidable; verdict uses residual <= tolerance".into());
    }

    Ok(ResidualReport {
        measure,
        alpha,
        regime: exponent.regime,
        focus: opts.focus,
        lhs,
        lhs_measure_value: terms.lhs.value,
        rhs_terms,
        residual,
        tolerance: opts.tolerance,
        verdict,
        exact,
        bound,
        k: terms.k,
        notes,
    })
}

fn full_terms(psi: &PureState, measure: MeasureId, opts: &ResidualOptions) -> Result<Terms> {
    let n = check_qubits(psi, opts.focus)?;
    let partners: Vec<usize> = (0..n).filter(|&q| q != opts.focus).collect();
    Ok(Terms {
        lhs: one_to_rest_measure(psi, opts.focus, measure)?,
        rhs: pairwise_terms(psi, opts.focus, &partners, measure)?,
        k: n,
    })
}

/// M(focus|rest)^α − Σ_k M(ρ_{focus,k})^α for a pure qubit state.
///
/// Pairwise terms use the analytic two-qubit routes. For α < 0 a zero-valued term
/// is excluded and the report is a vacuous pass.
pub fn alpha_residual(psi: &PureState, measure: MeasureId, alpha: f64, opts: &ResidualOptions) -> Result<ResidualReport> {
    AlphaExponent::new(alpha, measure)?;
    report(&full_terms(psi, measure, opts)?, measure, alpha, opts)
}

/// Hierarchical residual at level k:
/// `M(focus|rest)^α − Σ_{i<k−1} M(focus, oᵢ)^α − M(focus | o_{k−2} … o_{N−2})^α`,
/// where `o` lists the non-focus qubits in ascending order.
///
/// The tail is exact for negativity. For concurrence and CREN it comes from the
/// convex-roof optimizer and the report is marked as a bound. EoF tails must be pure.
pub fn hierarchical_residual(
    psi: &PureState,
    measure: MeasureId,
    alpha: f64,
    k: usize,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    AlphaExponent::new(alpha, measure)?;
    let n = check_qubits(psi, opts.focus)?;
    if k < 3 || k > n {
        return Err(Error::arg(format!("hierarchy level k = {k} outside [3, {n}]")));
    }
    if k == n {
        return alpha_residual(psi, measure, alpha, opts);
    }
    let others: Vec<usize> = (0..n).filter(|&q| q != opts.focus).collect();
    let (pairs, tail) = others.split_at(k - 2);
    let mut rhs = pairwise_terms(psi, opts.focus, pairs, measure)?;
    rhs.push((tail.to_vec(), tail_term(psi, opts.focus, tail, measure, opts)?));
    let terms = Terms { lhs: one_to_rest_measure(psi, opts.focus, measure)?, rhs, k };
    report(&terms, measure, alpha, opts)
}

/// [`alpha_residual`] restricted to α < 0.
pub fn polygamy_check(psi: &PureState, measure: MeasureId, alpha: f64, opts: &ResidualOptions) -> Result<ResidualReport> {
    if alpha > 0.0 {
        return Err(Error::arg(format!("polygamy check needs alpha <= 0, got {alpha}")));
    }
    alpha_residual(psi, measure, alpha, opts)
}

/// One report per grid point, in grid order. Measure values are computed once.
pub fn alpha_sweep(psi: &PureState, measure: MeasureId, alpha_grid: &[f64], opts: &ResidualOptions) -> Result<Vec<ResidualReport>> {
    if alpha_grid.is_empty() {
        return Err(Error::arg("alpha grid is empty"));
    }
    for &a in alpha_grid {
        AlphaExponent::new(a, measure)?;
    }
    let terms = full_terms(psi, measure, opts)?;
    alpha_grid.iter().map(|&a| report(&terms, measure, a, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ghz_state, random_pure_state, w_state};
    use crate::monogamy::{tau_concurrence_w_closed_form, tau_negativity_w_closed_form, Verdict};
    use approx::assert_relative_eq;

    fn opts() -> ResidualOptions {
        ResidualOptions::default()
    }

    #[test]
    fn ghz_concurrence_residual_is_one() {
        for n in 3..=5 {
            for alpha in [0.3, 1.0, 1.7] {
                let r = alpha_residual(&ghz_state(n).unwrap(), MeasureId::Concurrence, alpha, &opts()).unwrap();
                assert_relative_eq!(r.residual, 1.0, epsilon = 1e-10);
                assert_eq!(r.verdict, Verdict::Monogamous);
            }
        }
    }

    #[test]
    fn w_concurrence_matches_closed_form() {
        for n in 3..=5 {
            for alpha in [0.5, 1.0, 1.5] {
                let r = alpha_residual(&w_state(n).unwrap(), MeasureId::Concurrence, alpha, &opts()).unwrap();
                let expect = tau_concurrence_w_closed_form(n, alpha).unwrap();
                assert_relative_eq!(r.residual, expect, epsilon = 1e-10);
                assert_eq!(r.verdict, Verdict::Polygamous);
            }
        }
        let r = alpha_residual(&w_state(3).unwrap(), MeasureId::Concurrence, 1.0, &opts()).unwrap();
        assert_relative_eq!(r.residual, -0.39052, epsilon = 1e-5);
    }

    #[test]
    fn random_negativity_square_is_monogamous() {
        for seed in 0..20 {
            let psi = random_pure_state(&[2, 2, 2], seed).unwrap();
            let r = alpha_residual(&psi, MeasureId::Negativity, 2.0, &opts()).unwrap();
            assert!(r.residual >= -1e-10, "{}", r.residual);
            // brute force: marginals by explicit partial trace of the full density matrix
            let rho = to_density(&psi);
            let m01 = crate::linalg::partial_trace(&rho, &[0, 1]).unwrap();
            let m02 = crate::linalg::partial_trace(&rho, &[0, 2]).unwrap();
            let c = Bipartition::parse("0|1", 2).unwrap();
            let brute = negativity(&rho, &Bipartition::parse("0|12", 3).unwrap()).unwrap().value.powi(2)
                - negativity(&m01, &c).unwrap().value.powi(2)
                - negativity(&m02, &c).unwrap().value.powi(2);
            assert_relative_eq!(r.residual, brute, epsilon = 1e-12);
        }
    }

    #[test]
    fn hierarchy_endpoint_equals_full_residual() {
        let psi = random_pure_state(&[2, 2, 2, 2], 3).unwrap();
        let a = hierarchical_residual(&psi, MeasureId::Negativity, 2.0, 4, &opts()).unwrap();
        let b = alpha_residual(&psi, MeasureId::Negativity, 2.0, &opts()).unwrap();
        assert_eq!(a, b);
        let w3 = w_state(3).unwrap();
        assert_eq!(
            hierarchical_residual(&w3, MeasureId::Negativity, 2.0, 3, &opts()).unwrap(),
            alpha_residual(&w3, MeasureId::Negativity, 2.0, &opts()).unwrap()
        );
        assert!(hierarchical_residual(&psi, MeasureId::Negativity, 2.0, 2, &opts()).is_err());
        assert!(hierarchical_residual(&psi, MeasureId::Negativity, 2.0, 5, &opts()).is_err());
    }

    #[test]
    fn ghz4_hierarchy_tail_is_ppt() {
        // ρ_{A1A3A4} of GHZ₄ is (|000⟩⟨000| + |111⟩⟨111|)/2: diagonal, so its partial
        // transpose is itself and the tail negativity is 0.
        let r = hierarchical_residual(&ghz_state(4).unwrap(), MeasureId::Negativity, 2.0, 3, &opts()).unwrap();
        assert_relative_eq!(r.lhs, 1.0, epsilon = 1e-12);
        assert_eq!(r.rhs_terms.len(), 2);
        assert_eq!(r.rhs_terms[1].partners, vec![2, 3]);
        assert!(r.rhs_terms.iter().all(|t| t.value.abs() < 1e-12));
        assert_relative_eq!(r.residual, 1.0, epsilon = 1e-12);
        assert!(r.exact);
    }

    #[test]
    fn concurrence_tail_is_marked_as_bound() {
        let psi = random_pure_state(&[2, 2, 2, 2], 5).unwrap();
        let o = ResidualOptions { roof: crate::convexroof::RoofConfig { restarts: 4, ..Default::default() }, ..opts() };
        let r = hierarchical_residual(&psi, MeasureId::Concurrence, 2.0, 3, &o).unwrap();
        assert!(!r.exact);
        assert_eq!(r.bound, ResidualBound::LowerBound);
        assert!(r.notes.iter().any(|n| n.contains("lower bound")));
        assert!(r.residual >= -1e-9, "{}", r.residual);
    }

    #[test]
    fn eof_tail_refused_when_mixed() {
        let psi = random_pure_state(&[2, 2, 2, 2], 5).unwrap();
        let err = hierarchical_residual(&psi, MeasureId::Eof, 2.0, 3, &opts()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        // a product of a 3-qubit state with |0⟩ makes the focus+tail marginal pure
        let three = random_pure_state(&[2, 2, 2], 6).unwrap();
        let psi = crate::linalg::tensor_product(&crate::linalg::basis_state(vec![2], 0).unwrap(), &three);
        let o = ResidualOptions { focus: 1, ..opts() };
        let r = hierarchical_residual(&psi, MeasureId::Eof, 2.0, 3, &o).unwrap();
        assert!(r.exact);
    }

    #[test]
    fn polygamy_examples() {
        let r = polygamy_check(&w_state(3).unwrap(), MeasureId::Concurrence, -1.0, &opts()).unwrap();
        assert_relative_eq!(r.lhs, 3.0 / (2.0 * 2f64.sqrt()), epsilon = 1e-12);
        assert_relative_eq!(r.rhs_sum(), 3.0, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Polygamous);

        let g = polygamy_check(&ghz_state(3).unwrap(), MeasureId::Negativity, -1.0, &opts()).unwrap();
        assert_eq!(g.verdict, Verdict::VacuousPass);
        assert!(g.rhs_terms.iter().all(|t| t.excluded));

        assert!(polygamy_check(&w_state(3).unwrap(), MeasureId::Concurrence, 0.5, &opts()).is_err());
        assert!(alpha_residual(&w_state(3).unwrap(), MeasureId::Concurrence, 0.0, &opts()).is_err());
    }

    #[test]
    fn sweep_matches_closed_form() {
        let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.1).collect();
        let reports = alpha_sweep(&w_state(5).unwrap(), MeasureId::Negativity, &grid, &opts()).unwrap();
        assert_eq!(reports.len(), 19);
        for (r, a) in reports.iter().zip(&grid) {
            assert_eq!(r.alpha, *a);
            assert_relative_eq!(r.residual, tau_negativity_w_closed_form(5, *a).unwrap(), epsilon = 1e-10);
        }
        let one = alpha_sweep(&w_state(4).unwrap(), MeasureId::Negativity, &[2.0], &opts()).unwrap();
        assert_eq!(one[0], alpha_residual(&w_state(4).unwrap(), MeasureId::Negativity, 2.0, &opts()).unwrap());
        assert!(alpha_sweep(&w_state(4).unwrap(), MeasureId::Negativity, &[], &opts()).is_err());
    }

    #[test]
    fn rejects_non_qubit_input() {
        let psi = random_pure_state(&[2, 3, 2], 1).unwrap();
        assert!(alpha_residual(&psi, MeasureId::Negativity, 2.0, &opts()).is_err());
        let o = ResidualOptions { focus: 7, ..opts() };
        assert!(alpha_residual(&w_state(3).unwrap(), MeasureId::Negativity, 2.0, &o).is_err());
    }
}
