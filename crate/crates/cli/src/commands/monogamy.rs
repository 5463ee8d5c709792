use std::io::Write;

use qmonogamy::linalg::{derive_seed, random_pure_state, PureState, State};
use qmonogamy::monogamy::{alpha_sweep, hierarchical_residual, ResidualOptions, ResidualReport, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, MonogamyArgs};
use crate::config::{parse_alpha_grid, ConfigFile};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VIOLATION};
use crate::output::{csv_bytes, emit, float12, json_bytes};
use crate::states::{load_state, MAX_QUBITS};

#[derive(Debug, Serialize)]
struct Row<'a> {
    state: &'a str,
    #[serde(flatten)]
    report: &'a ResidualReport,
}

const CSV_HEADER: [&str; 12] =
    ["state", "measure", "alpha", "regime", "focus", "k", "lhs", "rhs_sum", "residual", "verdict", "exact", "bound"];

fn label<T: Serialize>(v: T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_owned)).unwrap_or_default()
}

fn csv_row(state: &str, r: &ResidualReport) -> Vec<String> {
    vec![
        state.to_string(),
        r.measure.to_string(),
        float12(r.alpha),
        label(r.regime),
        r.focus.to_string(),
        r.k.to_string(),
        float12(r.lhs),
        float12(r.rhs_sum()),
        float12(r.residual),
        label(r.verdict),
        r.exact.to_string(),
        label(r.bound),
    ]
}

fn states(args: &MonogamyArgs, cfg: &ConfigFile) -> CliResult<Vec<(String, PureState)>> {
    let random = args.random.or(if args.state.is_some() { None } else { cfg.random });
    if let Some(count) = random {
        if count == 0 {
            return Err(CliError::invalid("--random needs at least one sample"));
        }
        let n = args.n.or(cfg.n).unwrap_or(3);
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(CliError::invalid(format!("--n must be in 2..={MAX_QUBITS}")));
        }
        let seed = args.seed.or(cfg.seed).unwrap_or(0);
        return (0..count as u64)
            .into_par_iter()
            .map(|i| {
                let s = derive_seed(seed, i);
                Ok((format!("random:{n}:{s}"), random_pure_state(&vec![2; n], s)?))
            })
            .collect();
    }
    let spec = args
        .state
        .clone()
        .or_else(|| cfg.state.clone())
        .ok_or_else(|| CliError::invalid("either --state or --random is required"))?;
    match load_state(&spec, args.renormalize || cfg.renormalize.unwrap_or(false))? {
        State::Pure(psi) => Ok(vec![(spec, psi)]),
        State::Mixed(_) => Err(CliError::invalid(format!("monogamy checks need a pure state; {spec} is mixed"))),
    }
}

pub fn run(args: &MonogamyArgs, cfg: &ConfigFile, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let measure = args.measure.or(cfg.measure).ok_or_else(|| CliError::invalid("--measure is required"))?;
    let alphas = match (args.alpha, args.alpha_grid.as_ref()) {
        (Some(a), _) => vec![a],
        (None, Some(g)) => parse_alpha_grid(g)?,
        (None, None) => match (cfg.alpha, cfg.alpha_grid.as_ref()) {
            (Some(_), Some(_)) => return Err(CliError::invalid("config sets both alpha and alpha_grid")),
            (Some(a), None) => vec![a],
            (None, Some(g)) => parse_alpha_grid(g)?,
            (None, None) => return Err(CliError::invalid("--alpha or --alpha-grid is required")),
        },
    };
    let mut opts = ResidualOptions {
        focus: args.focus.or(cfg.focus).unwrap_or(0),
        roof: cfg.roof(&args.roof)?,
        ..ResidualOptions::default()
    };
    if let Some(t) = args.tolerance.or(cfg.tolerance) {
        if !(t >= 0.0) {
            return Err(CliError::invalid(format!("tolerance must be nonnegative, got {t}")));
        }
        opts.tolerance = t;
    }
    let k = args.k.or(cfg.k);
    let states = states(args, cfg)?;

    let reports: Vec<Vec<ResidualReport>> = states
        .par_iter()
        .map(|(_, psi)| match k {
            None => Ok(alpha_sweep(psi, measure, &alphas, &opts)?),
            Some(k) => alphas
                .iter()
                .map(|&a| Ok(hierarchical_residual(psi, measure, a, k, &opts)?))
                .collect::<CliResult<Vec<_>>>(),
        })
        .collect::<CliResult<_>>()?;

    let pairs: Vec<(&str, &ResidualReport)> = states
        .iter()
        .zip(&reports)
        .flat_map(|((label, _), rs)| rs.iter().map(move |r| (label.as_str(), r)))
        .collect();
    let bytes = match cfg.format(&args.output, Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = pairs.iter().map(|(s, r)| csv_row(s, r)).collect();
            csv_bytes(&CSV_HEADER, &rows)
        }
        Format::Json => {
            let rows: Vec<Row> = pairs.iter().map(|(s, r)| Row { state: s, report: r }).collect();
            json_bytes(&rows)
        }
    };
    emit(cfg.output(&args.output).as_deref(), &bytes, stdout)?;

    let violations = pairs.iter().filter(|(_, r)| r.verdict == Verdict::ViolationOfTheorem).count();
    let _ = writeln!(stderr, "{} reports, {violations} violations", pairs.len());
    Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}
