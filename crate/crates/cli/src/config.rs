use std::path::{Path, PathBuf};

use qmonogamy::convexroof::RoofConfig;
use qmonogamy::MeasureId;
use serde::Deserialize;

use crate::args::{Format, OutputArgs, RoofArgs, Suite};
use crate::error::{CliError, CliResult};

/// Environment variable naming the directory for files written without `--output`.
pub const OUTPUT_DIR_ENV: &str = "QMONO_OUTPUT_DIR";

/// Defaults for every flag, read from `--config`. Each command reads the keys it uses.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub state: Option<String>,
    pub measure: Option<MeasureId>,
    pub cut: Option<String>,
    pub alpha: Option<f64>,
    pub alpha_grid: Option<String>,
    pub k: Option<usize>,
    pub focus: Option<usize>,
    pub random: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub suite: Option<Suite>,
    pub tolerance: Option<f64>,
    pub renormalize: Option<bool>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub roof: Option<RoofConfig>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
    }

    pub fn roof(&self, flags: &RoofArgs) -> CliResult<RoofConfig> {
        let mut cfg = self.roof.clone().unwrap_or_default();
        if let Some(k) = flags.ensemble_size {
            cfg.ensemble_size = Some(k);
        }
        cfg.restarts = flags.restarts.unwrap_or(cfg.restarts);
        cfg.max_iterations = flags.max_iterations.unwrap_or(cfg.max_iterations);
        cfg.tolerance = flags.roof_tolerance.unwrap_or(cfg.tolerance);
        cfg.seed = flags.roof_seed.unwrap_or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn format(&self, flags: &OutputArgs, default: Format) -> Format {
        flags.format.or(self.format).unwrap_or(default)
    }

    pub fn output(&self, flags: &OutputArgs) -> Option<PathBuf> {
        flags.output.clone().or_else(|| self.output.clone())
    }
}

/// `START:STOP:STEP` with both ends included, or `a,b,c`.
pub fn parse_alpha_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::invalid(format!("bad alpha grid {text:?}; expected START:STOP:STEP or a comma list"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let grid: Vec<f64> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(CliError::invalid(format!("alpha grid {text:?} has {count} points")));
        }
        // snap to the decimal precision of the inputs so 0.02:1.98:0.02 yields 0.12, not 0.12000000000000001
        let places = parts.iter().map(|p| p.trim().split_once('.').map_or(0, |(_, f)| f.len())).max().unwrap_or(0);
        let snap = |x: f64| if places <= 15 { format!("{x:.places$}").parse().unwrap_or(x) } else { x };
        (0..count).map(|i| snap(start + step * i as f64)).collect()
    } else {
        text.split(',').map(num).collect::<CliResult<_>>()?
    };
    if grid.is_empty() {
        return Err(bad());
    }
    if let Some(a) = grid.iter().find(|a| **a == 0.0 || !a.is_finite()) {
        return Err(CliError::invalid(format!("alpha grid contains {a}; alpha must be finite and nonzero")));
    }
    Ok(grid)
}
