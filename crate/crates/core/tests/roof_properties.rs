use qmonogamy::convexroof::*;
use qmonogamy::linalg::*;
use qmonogamy::measures::{concurrence_pure, concurrence_two_qubit, negativity};
use qmonogamy::MeasureId;

fn two_qubit_cut() -> Bipartition {
    Bipartition::one_vs_rest(0, 2).unwrap()
}

fn quick() -> RoofConfig {
    RoofConfig { restarts: 6, ..RoofConfig::default() }
}

#[test]
fn optimizer_never_undercuts_wootters() {
    let cut = two_qubit_cut();
    for i in 0..12 {
        let rank = 2 + i % 3;
        let rho = random_mixed_state(&[2, 2], rank, derive_seed(11, i as u64)).unwrap();
        let exact = concurrence_two_qubit(&rho).unwrap().value;
        let r = convex_roof(&rho, &cut, MeasureId::Concurrence, &quick()).unwrap();
        assert!(r.value >= exact - 1e-9, "rank {rank}: {} < {exact}", r.value);
        assert!(r.value - exact <= 1e-3, "rank {rank}: gap {}", r.value - exact);
    }
}

#[test]
fn returned_ensembles_reproduce_the_state() {
    let cut = Bipartition::one_vs_rest(0, 3).unwrap();
    for seed in 0..4 {
        let rho = random_mixed_state(&[2, 2, 2], 3, seed).unwrap();
        let r = convex_roof(&rho, &cut, MeasureId::Concurrence, &quick()).unwrap();
        let e = &r.best_ensemble;
        e.validate().unwrap();
        let dev = (e.reconstruct() - rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev <= 1e-10, "reconstruction off by {dev}");
        let avg = e.average(|psi| Ok(concurrence_pure(psi, &cut)?.value)).unwrap();
        assert!((avg - r.value).abs() <= 1e-9, "{avg} vs {}", r.value);
    }
}

#[test]
fn histories_never_increase() {
    let cut = two_qubit_cut();
    for seed in 0..6 {
        let rho = random_mixed_state(&[2, 2], 4, seed).unwrap();
        let r = convex_roof(&rho, &cut, MeasureId::Concurrence, &quick()).unwrap();
        for h in &r.objective_history {
            for w in h.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{} -> {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn larger_ensembles_do_not_do_worse() {
    let cut = two_qubit_cut();
    for i in 0..20 {
        let rho = random_mixed_state(&[2, 2], 2, derive_seed(21, i)).unwrap();
        let small = RoofConfig { ensemble_size: Some(2), ..RoofConfig::default() };
        let large = RoofConfig { ensemble_size: Some(3), ..RoofConfig::default() };
        let a = convex_roof(&rho, &cut, MeasureId::Concurrence, &small).unwrap().value;
        let b = convex_roof(&rho, &cut, MeasureId::Concurrence, &large).unwrap().value;
        assert!(b <= a + 1e-6, "K = 3 gave {b}, K = 2 gave {a}");
    }
}

#[test]
fn seeds_fix_the_result() {
    let rho = random_mixed_state(&[2, 2], 3, 8).unwrap();
    let cfg = RoofConfig { seed: 5, ..quick() };
    let a = convex_roof(&rho, &two_qubit_cut(), MeasureId::Concurrence, &cfg).unwrap();
    let b = convex_roof(&rho, &two_qubit_cut(), MeasureId::Concurrence, &cfg).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.objective_history, b.objective_history);
}

#[test]
fn negativity_roof_matches_concurrence_roof_on_qubit_cuts() {
    let cut = two_qubit_cut();
    for seed in 0..5 {
        let rho = random_mixed_state(&[2, 2], 3, seed).unwrap();
        let c = concurrence_two_qubit(&rho).unwrap().value;
        let n = convex_roof(&rho, &cut, MeasureId::Negativity, &quick()).unwrap().value;
        assert!((n - c).abs() <= 1e-3, "{n} vs {c}");
        assert!(n >= negativity(&rho, &cut).unwrap().value - 1e-9);
    }
}

#[test]
fn qutrit_sides_use_the_spectral_objective() {
    // The roof of a 3x3 state is bounded below by its mixed-state negativity.
    let rho = random_mixed_state(&[3, 3], 2, 4).unwrap();
    let cut = two_qubit_cut();
    let r = convex_roof(&rho, &cut, MeasureId::Negativity, &quick()).unwrap();
    assert!(r.value >= negativity(&rho, &cut).unwrap().value - 1e-9);
    r.best_ensemble.validate().unwrap();
}

#[test]
fn rejects_bad_configs_and_measures() {
    let rho = random_mixed_state(&[2, 2], 2, 1).unwrap();
    let cut = two_qubit_cut();
    let bad = RoofConfig { restarts: 0, ..RoofConfig::default() };
    assert!(convex_roof(&rho, &cut, MeasureId::Concurrence, &bad).is_err());
    let small = RoofConfig { ensemble_size: Some(1), ..RoofConfig::default() };
    assert!(convex_roof(&rho, &cut, MeasureId::Concurrence, &small).is_err());
    assert!(convex_roof(&rho, &cut, MeasureId::Eof, &RoofConfig::default()).is_err());
}
