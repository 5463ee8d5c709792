//! Acceptance criteria 1–10. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Tolerances and sample counts are pinned below.

use std::f64::consts::SQRT_2;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qmonogamy::convexroof::{convex_roof, RoofConfig};
use qmonogamy::linalg::*;
use qmonogamy::measures::*;
use qmonogamy::monogamy::*;
use qmonogamy::MeasureId;

const PURE_EQUALITY_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-10;
const W3_MARGIN: f64 = 1e-6;
const CROSSING_TOL: f64 = 1e-8;
const ROOF_LOWER: f64 = -1e-9;
const ROOF_UPPER: f64 = 1e-3;
const ROOF_MEDIAN: f64 = 1e-4;
const CREN_ROOF_TOL: f64 = 1e-3;
const ORDERING_TOL: f64 = 1e-9;
const POLYGAMY_FLOOR: f64 = 0.05;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

fn qubits(n: usize) -> Vec<usize> {
    vec![2; n]
}

fn opts() -> ResidualOptions {
    ResidualOptions::default()
}

/// 50 points spread over (0, 2).
fn grid50() -> Vec<f64> {
    (1..=50).map(|i| 0.04 * i as f64 - 0.02).collect()
}

fn shannon_bits(ps: &[f64]) -> f64 {
    ps.iter().filter(|p| **p > 0.0).map(|p| -p * p.log2()).sum()
}

fn binary_h(x: f64) -> f64 {
    shannon_bits(&[x, 1.0 - x])
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (d, dims) in [[2, 2, 2], [2, 2, 4], [2, 3, 3]].iter().enumerate() {
        for i in 0..200 {
            let psi = random_pure_state(dims, derive_seed(1000 + d as u64, i)).unwrap();
            let cut = Bipartition::one_vs_rest(0, 3).unwrap();
            let n = negativity(&to_density(&psi), &cut).unwrap().value;
            let c = concurrence_pure(&psi, &cut).unwrap().value;
            worst = worst.max((n - c).abs());
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= PURE_EQUALITY_TOL && elapsed < Duration::from_secs(10),
        format!("{count} states, max |N - C| = {worst:.2e} (tol {PURE_EQUALITY_TOL:e}), {} (limit 10 s)", secs(elapsed)),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut min = f64::INFINITY;
    let mut count = 0;
    for n in [3usize, 4] {
        for i in 0..500 {
            let psi = random_pure_state(&qubits(n), derive_seed(2000 + n as u64, i)).unwrap();
            for measure in [MeasureId::Negativity, MeasureId::Cren, MeasureId::Concurrence] {
                for r in alpha_sweep(&psi, measure, &[2.0, 2.5, 3.0], &opts()).unwrap() {
                    min = min.min(r.residual);
                    count += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        min >= -RESIDUAL_TOL && elapsed < Duration::from_secs(60),
        format!("{count} residuals, min {min:.3e} (floor -{RESIDUAL_TOL:e}), {} (limit 60 s)", secs(elapsed)),
    )
}

fn criterion_3() -> Outcome {
    let mut min = f64::INFINITY;
    let mut oracle_dev: f64 = 0.0;
    for i in 0..500 {
        let psi = random_pure_state(&qubits(3), derive_seed(3000, i)).unwrap();
        // oracle: entropy of the one-qubit marginal spectrum and h((1 + sqrt(1 - C^2)) / 2)
        // on the pair marginals with C from the sqrt(rho) route
        let lhs = shannon_bits(&hermitian_eigenvalues(reduced_density(&psi, &[0]).unwrap().matrix()));
        let pairs: Vec<f64> = [1, 2]
            .iter()
            .map(|&k| {
                let c = concurrence_two_qubit_sqrt_route(&reduced_density(&psi, &[0, k]).unwrap()).unwrap();
                binary_h((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
            })
            .collect();
        for alpha in [SQRT_2, 1.5, 2.0] {
            let r = alpha_residual(&psi, MeasureId::Eof, alpha, &opts()).unwrap();
            min = min.min(r.residual);
            let expect = lhs.powf(alpha) - pairs.iter().map(|e| e.powf(alpha)).sum::<f64>();
            oracle_dev = oracle_dev.max((r.residual - expect).abs());
        }
    }
    outcome(
        min >= -RESIDUAL_TOL && oracle_dev <= 1e-7,
        format!("1500 EoF residuals, min {min:.3e} (floor -{RESIDUAL_TOL:e}), max oracle deviation {oracle_dev:.2e}"),
    )
}

fn tau_c_w(n: usize, alpha: f64) -> f64 {
    let n = n as f64;
    (2.0 / n).powf(alpha) * ((n - 1.0).powf(alpha / 2.0) - (n - 1.0))
}

fn criterion_4() -> Outcome {
    let grid = grid50();
    let mut ghz_dev: f64 = 0.0;
    let mut w_dev: f64 = 0.0;
    let mut signs_ok = true;
    for n in 3..=5 {
        for r in alpha_sweep(&ghz_state(n).unwrap(), MeasureId::Concurrence, &grid, &opts()).unwrap() {
            ghz_dev = ghz_dev.max((r.residual - 1.0).abs());
        }
        for r in alpha_sweep(&w_state(n).unwrap(), MeasureId::Concurrence, &grid, &opts()).unwrap() {
            w_dev = w_dev.max((r.residual - tau_c_w(n, r.alpha)).abs());
            signs_ok &= if n == 3 && r.alpha <= 1.9 { r.residual < -W3_MARGIN } else { r.residual < 0.0 };
        }
    }
    outcome(
        ghz_dev <= CLOSED_FORM_TOL && w_dev <= CLOSED_FORM_TOL && signs_ok,
        format!(
            "GHZ |residual - 1| max {ghz_dev:.2e}, W vs (2/N)^a[(N-1)^(a/2) - (N-1)] max {w_dev:.2e} (tol {CLOSED_FORM_TOL:e}), W signs {}",
            if signs_ok { "negative" } else { "WRONG" }
        ),
    )
}

/// Independent W-state negativity residual with the pairwise bracket under exponent α/2.
fn tau_n_w(n: usize, alpha: f64) -> f64 {
    let m = n as f64 - 2.0;
    let bracket = 2.0 * m * m + 4.0 - 2.0 * m * (m * m + 4.0).sqrt();
    let n = n as f64;
    (2f64.powf(alpha) * (n - 1.0).powf(alpha / 2.0) - (n - 1.0) * bracket.powf(alpha / 2.0)) / n.powf(alpha)
}

fn criterion_5() -> Outcome {
    let grid: Vec<f64> = (1..=100).map(|i| 0.02 * i as f64).collect();
    let mut dev: f64 = 0.0;
    let mut shape_ok = true;
    let mut crossings = Vec::new();
    for n in 3..=5 {
        let reports = alpha_sweep(&w_state(n).unwrap(), MeasureId::Negativity, &grid, &opts()).unwrap();
        for r in &reports {
            dev = dev.max((r.residual - tau_n_w(n, r.alpha)).abs());
        }
        let first = reports.first().unwrap().residual;
        let last = reports.last().unwrap().residual;
        let changes = reports.windows(2).filter(|w| (w[0].residual < 0.0) != (w[1].residual < 0.0)).count();
        let x = tau_negativity_w_zero_crossing(n, CROSSING_TOL).unwrap();
        let bracketed = tau_n_w(n, x - CROSSING_TOL) < 0.0 && tau_n_w(n, x + CROSSING_TOL) > 0.0;
        shape_ok &= first < 0.0 && last > 0.0 && changes == 1 && bracketed;
        crossings.push(format!("N={n}: {x:.8}"));
    }
    let endpoint = alpha_residual(&w_state(3).unwrap(), MeasureId::Negativity, 2.0, &opts()).unwrap().residual;
    let exact = (4.0 * 5f64.sqrt() - 4.0) / 9.0;
    let endpoint_dev = (endpoint - exact).abs();
    outcome(
        dev <= CLOSED_FORM_TOL && endpoint_dev <= CLOSED_FORM_TOL && shape_ok,
        format!(
            "direct vs closed form max {dev:.2e} (tol {CLOSED_FORM_TOL:e}), N=3 endpoint {endpoint:.12} vs (4*sqrt5 - 4)/9, one crossing each at {}",
            crossings.join(", ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut accepted = 0;
    let mut draw = 0;
    let mut max = f64::NEG_INFINITY;
    while accepted < 300 {
        let psi = random_pure_state(&qubits(3), derive_seed(6000, draw)).unwrap();
        draw += 1;
        let entangled = [1, 2].iter().all(|&k| {
            let rho = reduced_density(&psi, &[0, k]).unwrap();
            MeasureId::ALL.iter().all(|&m| pairwise_measure(&rho, m).unwrap().value > POLYGAMY_FLOOR)
        });
        if !entangled {
            continue;
        }
        accepted += 1;
        for measure in MeasureId::ALL {
            for alpha in [-0.5, -1.0, -2.0] {
                max = max.max(polygamy_check(&psi, measure, alpha, &opts()).unwrap().residual);
            }
        }
    }
    outcome(
        max <= RESIDUAL_TOL,
        format!("300 states ({draw} drawn), 3600 residuals, max {max:.3e} (ceiling {RESIDUAL_TOL:e})"),
    )
}

fn roof_batch() -> Vec<DensityMatrix> {
    let mut states = Vec::new();
    for i in 0..50 {
        states.push(random_mixed_state(&[2, 2], 2, derive_seed(7002, i)).unwrap());
    }
    for i in 0..25 {
        states.push(random_mixed_state(&[2, 2], 4, derive_seed(7004, i)).unwrap());
    }
    states
}

fn criterion_7(batch: &[DensityMatrix]) -> Outcome {
    let start = Instant::now();
    let cut = Bipartition::one_vs_rest(0, 2).unwrap();
    let mut gaps: Vec<f64> = batch
        .iter()
        .map(|rho| {
            convex_roof(rho, &cut, MeasureId::Concurrence, &RoofConfig::default()).unwrap().value
                - concurrence_two_qubit(rho).unwrap().value
        })
        .collect();
    let elapsed = start.elapsed();
    gaps.sort_by(f64::total_cmp);
    let (min, max, median) = (gaps[0], gaps[gaps.len() - 1], gaps[gaps.len() / 2]);
    outcome(
        min >= ROOF_LOWER && max <= ROOF_UPPER && median <= ROOF_MEDIAN && elapsed < Duration::from_secs(300),
        format!(
            "75 states, gap min {min:.2e} max {max:.2e} (range [{ROOF_LOWER:e}, {ROOF_UPPER:e}]), median {median:.2e} (limit {ROOF_MEDIAN:e}), {} (limit 300 s)",
            secs(elapsed)
        ),
    )
}

fn criterion_8(batch: &[DensityMatrix]) -> Outcome {
    let cut = Bipartition::one_vs_rest(0, 2).unwrap();
    let mut identical = true;
    let mut roof_dev: f64 = 0.0;
    for rho in batch {
        let c = concurrence_two_qubit(rho).unwrap().value;
        let analytic = cren(&State::Mixed(rho.clone()), &cut, None).unwrap().value;
        identical &= analytic.to_bits() == c.to_bits();
        let roof = convex_roof(rho, &cut, MeasureId::Negativity, &RoofConfig::default()).unwrap().value;
        roof_dev = roof_dev.max((roof - c).abs());
    }
    outcome(
        identical && roof_dev <= CREN_ROOF_TOL,
        format!(
            "analytic CREN {} concurrence on 75 states, negativity-roof max deviation {roof_dev:.2e} (tol {CREN_ROOF_TOL:e})",
            if identical { "bit-identical to" } else { "DIFFERS from" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let cut = Bipartition::one_vs_rest(0, 2).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..500u64 {
        let rho = random_mixed_state(&[2, 2], 1 + (i % 4) as usize, derive_seed(9000, i)).unwrap();
        worst = worst.max(negativity(&rho, &cut).unwrap().value - concurrence_two_qubit(&rho).unwrap().value);
    }
    outcome(worst <= ORDERING_TOL, format!("500 states, max N - C = {worst:.3e} (ceiling {ORDERING_TOL:e})"))
}

fn run_twice(args: &[&str], dir_a: &Path, dir_b: &Path) -> (Vec<u8>, Vec<u8>) {
    let exe = env!("CARGO_BIN_EXE_qmono");
    let run = |dir: &Path| {
        let out = Command::new(exe).args(args).current_dir(dir).env_remove("QMONO_OUTPUT_DIR").output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    (run(dir_a), run(dir_b))
}

fn criterion_10() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut same = true;
    let mut checked = Vec::new();

    run_twice(&["fig1", "--seed", "11"], a.path(), b.path());
    for file in ["fig1.csv", "fig1.crossings.json"] {
        same &= std::fs::read(a.path().join(file)).unwrap() == std::fs::read(b.path().join(file)).unwrap();
        checked.push(file.to_string());
    }
    for suite in ["lemma1", "regime", "polygamy", "roofgap"] {
        let samples = if suite == "roofgap" { "6" } else { "40" };
        let (x, y) = run_twice(&["audit", "--suite", suite, "--samples", samples, "--seed", "3"], a.path(), b.path());
        same &= x == y && !x.is_empty();
        checked.push(format!("audit {suite}"));
    }
    outcome(same, format!("byte-identical across two runs: {}", checked.join(", ")))
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let batch = roof_batch();
    let criteria: Vec<(&str, Check)> = vec![
        ("qubit-vs-rest negativity equals concurrence", Box::new(criterion_1)),
        ("negativity/CREN/concurrence monogamy", Box::new(criterion_2)),
        ("EoF monogamy", Box::new(criterion_3)),
        ("GHZ/W concurrence closed forms", Box::new(criterion_4)),
        ("W negativity residual curves", Box::new(criterion_5)),
        ("polygamy regime", Box::new(criterion_6)),
        ("convex-roof certification", Box::new(|| criterion_7(&batch))),
        ("CREN identity", Box::new(|| criterion_8(&batch))),
        ("negativity <= concurrence", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.passed);
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
