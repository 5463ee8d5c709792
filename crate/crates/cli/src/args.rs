use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmonogamy::MeasureId;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "qmono", version, about = "Entanglement measures and alpha-power monogamy checks for multiqubit states")]
pub struct Cli {
    /// JSON file with defaults for any flag; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one entanglement measure across a cut.
    Measure(MeasureArgs),
    /// Residual tangles for one state or a batch of random states.
    Monogamy(MonogamyArgs),
    /// Negativity residual of W states against alpha, for N = 3, 4, 5.
    Fig1(Fig1Args),
    /// Run a named invariant suite over random samples.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma1,
    Ordering,
    Regime,
    Polygamy,
    Closedforms,
    Roofgap,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of the default destination.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RoofArgs {
    /// Ensemble size K for convex-roof searches (default min(2r, r + 2)).
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Sweep limit per restart.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Relative decrease below which a sweep counts as stalled.
    #[arg(long)]
    pub roof_tolerance: Option<f64>,
    #[arg(long)]
    pub roof_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MeasureArgs {
    /// ghz:N, w:N, bell, random:N:SEED or file:PATH
    #[arg(long)]
    pub state: Option<String>,
    /// concurrence, negativity, cren or eof
    #[arg(long)]
    pub measure: Option<MeasureId>,
    /// Cut such as 0|12 (digits for up to 10 subsystems, else 0|1,2,...). Default: first subsystem vs rest.
    #[arg(long)]
    pub cut: Option<String>,
    /// Accept and rescale slightly non-normalized state files.
    #[arg(long)]
    pub renormalize: bool,
    #[command(flatten)]
    pub roof: RoofArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MonogamyArgs {
    #[arg(long, conflicts_with = "random")]
    pub state: Option<String>,
    /// Number of Haar-random pure states to check instead of --state.
    #[arg(long)]
    pub random: Option<usize>,
    /// Qubit count for --random.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub measure: Option<MeasureId>,
    #[arg(long, conflicts_with = "alpha_grid", allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// START:STOP:STEP (inclusive) or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_grid: Option<String>,
    /// Hierarchy level in [3, N]; the default N sums all pairwise terms.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub focus: Option<usize>,
    /// Verdict tolerance on residuals.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub renormalize: bool,
    #[command(flatten)]
    pub roof: RoofArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Fig1Args {
    /// START:STOP:STEP (inclusive) or a comma list; default 0.02:1.98:0.02.
    #[arg(long)]
    pub alpha_grid: Option<String>,
    /// Seed choosing the rows re-derived from states.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AuditArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub roof: RoofArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
