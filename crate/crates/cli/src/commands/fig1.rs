use std::io::Write;
use std::path::{Path, PathBuf};

use qmonogamy::linalg::{rng_from_seed, w_state};
use qmonogamy::monogamy::{
    alpha_residual, count_sign_changes, tau_negativity_w_closed_form, tau_negativity_w_zero_crossing, ResidualOptions,
};
use qmonogamy::MeasureId;
use rand::seq::index::sample;
use serde::Serialize;

use crate::args::{Fig1Args, Format};
use crate::config::{parse_alpha_grid, ConfigFile, OUTPUT_DIR_ENV};
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::output::{csv_bytes, float12, json_bytes, write_file};

pub const DEFAULT_GRID: &str = "0.02:1.98:0.02";
pub const SIZES: [usize; 3] = [3, 4, 5];
const SPOT_ROWS: usize = 10;
const SPOT_TOLERANCE: f64 = 1e-10;
const CROSSING_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct Fig1Row {
    alpha: f64,
    n3: f64,
    n4: f64,
    n5: f64,
}

#[derive(Debug, Serialize)]
struct Crossing {
    n: usize,
    /// Zero of the closed form, bisected on (0, 2].
    alpha: f64,
    tolerance: f64,
    sign_changes_on_grid: usize,
}

#[derive(Debug, Serialize)]
struct SpotCheck {
    row: usize,
    alpha: f64,
    n: usize,
    closed_form: f64,
    direct: f64,
    deviation: f64,
}

#[derive(Debug, Serialize)]
struct Sidecar {
    grid_points: usize,
    crossings: Vec<Crossing>,
    spot_check_seed: u64,
    spot_check_tolerance: f64,
    spot_checks: Vec<SpotCheck>,
    max_spot_deviation: f64,
}

/// `fig1.csv` → `fig1.crossings.json`.
pub fn sidecar_path(main: &Path) -> PathBuf {
    let stem = main.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "fig1".into());
    main.with_file_name(format!("{stem}.crossings.json"))
}

fn default_output(format: Format) -> PathBuf {
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    dir.join(match format {
        Format::Csv => "fig1.csv",
        Format::Json => "fig1.json",
    })
}

pub fn run(args: &Fig1Args, cfg: &ConfigFile, stdout: &mut dyn Write) -> CliResult<i32> {
    let grid_text = args.alpha_grid.as_deref().or(cfg.alpha_grid.as_deref()).unwrap_or(DEFAULT_GRID);
    let grid = parse_alpha_grid(grid_text)?;
    if let Some(a) = grid.iter().find(|a| !(**a > 0.0 && **a <= 2.0)) {
        return Err(CliError::invalid(format!("fig1 grid point {a} outside (0, 2]")));
    }
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let format = cfg.format(&args.output, Format::Csv);
    let path = cfg.output(&args.output).unwrap_or_else(|| default_output(format));

    let closed = |n: usize, a: f64| tau_negativity_w_closed_form(n, a);
    let rows: Vec<Fig1Row> = grid
        .iter()
        .map(|&alpha| Ok(Fig1Row { alpha, n3: closed(3, alpha)?, n4: closed(4, alpha)?, n5: closed(5, alpha)? }))
        .collect::<CliResult<_>>()?;

    let crossings: Vec<Crossing> = SIZES
        .iter()
        .map(|&n| {
            Ok(Crossing {
                n,
                alpha: tau_negativity_w_zero_crossing(n, CROSSING_TOLERANCE)?,
                tolerance: CROSSING_TOLERANCE,
                sign_changes_on_grid: count_sign_changes(&grid, |a| closed(n, a).unwrap_or(f64::NAN)),
            })
        })
        .collect::<CliResult<_>>()?;

    let mut rng = rng_from_seed(seed);
    let mut picked = sample(&mut rng, rows.len(), SPOT_ROWS.min(rows.len())).into_vec();
    picked.sort_unstable();
    let opts = ResidualOptions::default();
    let mut spot_checks = Vec::new();
    for row in picked {
        let r = &rows[row];
        for (n, closed_form) in SIZES.into_iter().zip([r.n3, r.n4, r.n5]) {
            let direct = alpha_residual(&w_state(n)?, MeasureId::Negativity, r.alpha, &opts)?.residual;
            spot_checks.push(SpotCheck {
                row,
                alpha: r.alpha,
                n,
                closed_form,
                direct,
                deviation: (direct - closed_form).abs(),
            });
        }
    }
    let max_spot_deviation = spot_checks.iter().map(|s| s.deviation).fold(0.0, f64::max);
    let sidecar = Sidecar {
        grid_points: rows.len(),
        crossings,
        spot_check_seed: seed,
        spot_check_tolerance: SPOT_TOLERANCE,
        spot_checks,
        max_spot_deviation,
    };

    let bytes = match format {
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![float12(r.alpha), float12(r.n3), float12(r.n4), float12(r.n5)])
                .collect();
            csv_bytes(&["alpha", "n3", "n4", "n5"], &cells)
        }
        Format::Json => json_bytes(&rows),
    };
    let side = sidecar_path(&path);
    write_file(&path, &bytes)?;
    write_file(&side, &json_bytes(&sidecar))?;
    let _ = writeln!(stdout, "{}\n{}", path.display(), side.display());

    if max_spot_deviation > SPOT_TOLERANCE {
        return Err(CliError::Violation(format!(
            "closed form and direct state computation differ by {max_spot_deviation:e}"
        )));
    }
    Ok(EXIT_OK)
}
