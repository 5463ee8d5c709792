use std::io::Write;

use qmonogamy::linalg::Bipartition;
use qmonogamy::measures::evaluate;
use qmonogamy::MeasureId;
use serde::Serialize;

use crate::args::{Format, MeasureArgs};
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::output::{csv_bytes, emit, float12, json_bytes};
use crate::states::load_state;

#[derive(Debug, Serialize)]
struct MeasureRecord {
    state: String,
    dims: Vec<usize>,
    measure: MeasureId,
    cut: String,
    value: f64,
    exact: bool,
}

pub fn run(args: &MeasureArgs, cfg: &ConfigFile, stdout: &mut dyn Write) -> CliResult<i32> {
    let spec = args.state.clone().or_else(|| cfg.state.clone()).ok_or_else(|| CliError::invalid("--state is required"))?;
    let measure = args.measure.or(cfg.measure).ok_or_else(|| CliError::invalid("--measure is required"))?;
    let roof = cfg.roof(&args.roof)?;
    let state = load_state(&spec, args.renormalize || cfg.renormalize.unwrap_or(false))?;
    let n = state.dims().len();
    let cut = match args.cut.as_ref().or(cfg.cut.as_ref()) {
        Some(text) => Bipartition::parse(text, n)?,
        None => Bipartition::one_vs_rest(0, n)?,
    };
    let value = evaluate(&state, measure, &cut, Some(&roof))?;
    let record = MeasureRecord {
        state: spec,
        dims: state.dims().to_vec(),
        measure,
        cut: cut.to_string(),
        value: value.value,
        exact: value.exact,
    };
    let bytes = match cfg.format(&args.output, Format::Csv) {
        Format::Csv => csv_bytes(
            &["state", "measure", "cut", "value", "exact"],
            &[vec![
                record.state.clone(),
                measure.to_string(),
                record.cut.clone(),
                float12(record.value),
                record.exact.to_string(),
            ]],
        ),
        Format::Json => json_bytes(&record),
    };
    emit(cfg.output(&args.output).as_deref(), &bytes, stdout)?;
    Ok(EXIT_OK)
}
