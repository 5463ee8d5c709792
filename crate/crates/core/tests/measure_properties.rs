use proptest::prelude::*;
use qmonogamy::linalg::*;
use qmonogamy::measures::*;

fn product_state(dims: &[usize], seed: u64) -> PureState {
    let mut psi = random_pure_state(&dims[..1], seed).unwrap();
    for (i, &d) in dims.iter().enumerate().skip(1) {
        psi = tensor_product(&psi, &random_pure_state(&[d], derive_seed(seed, i as u64)).unwrap());
    }
    psi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn negativity_equals_concurrence_for_qubit_vs_rest(m in 2usize..=4, n in 2usize..=4, seed: u64) {
        let psi = random_pure_state(&[2, m, n], seed).unwrap();
        let cut = Bipartition::one_vs_rest(0, 3).unwrap();
        let neg = negativity(&to_density(&psi), &cut).unwrap().value;
        let con = concurrence_pure(&psi, &cut).unwrap().value;
        prop_assert!((neg - con).abs() <= 1e-10, "N = {neg}, C = {con}");
    }

    #[test]
    fn concurrence_bounds_negativity_on_two_qubits(rank in 1usize..=4, seed: u64) {
        let rho = random_mixed_state(&[2, 2], rank, seed).unwrap();
        let cut = Bipartition::one_vs_rest(0, 2).unwrap();
        let neg = negativity(&rho, &cut).unwrap().value;
        let con = concurrence_two_qubit(&rho).unwrap().value;
        prop_assert!(neg <= con + 1e-10, "N = {neg}, C = {con}");
    }

    #[test]
    fn rank_one_mixed_route_matches_pure_route(seed: u64) {
        let psi = random_pure_state(&[2, 2], seed).unwrap();
        let cut = Bipartition::one_vs_rest(0, 2).unwrap();
        let mixed = concurrence_two_qubit(&to_density(&psi)).unwrap().value;
        let pure = concurrence_pure(&psi, &cut).unwrap().value;
        prop_assert!((mixed - pure).abs() <= 1e-10);
    }

    #[test]
    fn eof_pure_is_symmetric_in_the_cut(dims in prop::collection::vec(2usize..=3, 2..=4), seed: u64) {
        let psi = random_pure_state(&dims, seed).unwrap();
        let cut = Bipartition::one_vs_rest(0, dims.len()).unwrap();
        let a = eof_pure(&psi, &cut).unwrap().value;
        let b = eof_pure(&psi, &cut.swapped()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn measures_vanish_on_product_states(dims in prop::collection::vec(2usize..=3, 2..=3), seed: u64) {
        let psi = product_state(&dims, seed);
        let cut = Bipartition::one_vs_rest(0, dims.len()).unwrap();
        let state = State::from(psi.clone());
        prop_assert!(negativity(&to_density(&psi), &cut).unwrap().value <= 1e-9);
        prop_assert!(concurrence_pure(&psi, &cut).unwrap().value <= 1e-9);
        prop_assert!(eof_pure(&psi, &cut).unwrap().value <= 1e-9);
        prop_assert!(cren(&state, &cut, None).unwrap().value <= 1e-9);
    }

    #[test]
    fn product_two_qubit_mixed_states_are_unentangled(ra in 1usize..=2, rb in 1usize..=2, seed: u64) {
        let rho = tensor_product_mixed(
            &random_mixed_state(&[2], ra, seed).unwrap(),
            &random_mixed_state(&[2], rb, derive_seed(seed, 1)).unwrap(),
        );
        prop_assert!(concurrence_two_qubit(&rho).unwrap().value <= 1e-9);
        prop_assert!(eof_two_qubit(&rho).unwrap().value <= 1e-9);
        prop_assert!(negativity(&rho, &Bipartition::one_vs_rest(0, 2).unwrap()).unwrap().value <= 1e-9);
    }

    #[test]
    fn measures_are_local_unitary_invariant(target in 0usize..3, seed: u64) {
        let psi = random_pure_state(&[2, 2, 3], seed).unwrap();
        let mut rng = rng_from_seed(derive_seed(seed, 3));
        let u = random_unitary(psi.dims()[target], &mut rng);
        let moved = apply_local_unitary(&psi, target, &u).unwrap();
        let cut = Bipartition::one_vs_rest(0, 3).unwrap();
        for measure in MeasureId::ALL {
            let a = evaluate(&psi.clone().into(), measure, &cut, None).unwrap().value;
            let b = evaluate(&moved.clone().into(), measure, &cut, None).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-9, "{measure}: {a} vs {b}");
        }
        let pair = [0usize, 1];
        let before = reduced_density(&psi, &pair).unwrap();
        let after = reduced_density(&moved, &pair).unwrap();
        let a = concurrence_two_qubit(&before).unwrap().value;
        let b = concurrence_two_qubit(&after).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn cren_two_qubit_route_is_wootters(rank in 2usize..=4, seed: u64) {
        let rho = random_mixed_state(&[2, 2], rank, seed).unwrap();
        let cut = Bipartition::one_vs_rest(0, 2).unwrap();
        let c = concurrence_two_qubit(&rho).unwrap();
        let r = cren(&State::Mixed(rho), &cut, None).unwrap();
        prop_assert_eq!(r.value, c.value);
        prop_assert!(r.exact);
    }

    #[test]
    fn eof_grows_with_concurrence(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(eof_from_concurrence(lo).unwrap() <= eof_from_concurrence(hi).unwrap() + 1e-15);
    }
}

#[test]
fn maximally_entangled_states_have_unit_measures() {
    let bell = bell_state();
    let cut = Bipartition::one_vs_rest(0, 2).unwrap();
    for measure in MeasureId::ALL {
        let v = evaluate(&bell.clone().into(), measure, &cut, None).unwrap();
        assert!((v.value - 1.0).abs() <= 1e-12, "{measure}: {}", v.value);
    }
}

#[test]
fn unsupported_routes_are_reported() {
    let rho = random_mixed_state(&[3, 3], 2, 1).unwrap();
    let cut = Bipartition::one_vs_rest(0, 2).unwrap();
    let err = evaluate(&rho.into(), MeasureId::Eof, &cut, None).unwrap_err();
    assert!(matches!(err, qmonogamy::Error::Unsupported(_)), "{err}");
}
