//! Builtin state specs: `ghz:N`, `w:N`, `bell`, `random:N:SEED` (Haar-random
//! N-qubit pure state) and `file:PATH` (JSON state file).

use std::path::Path;

use qmonogamy::linalg::{bell_state, ghz_state, parse_state_json, random_pure_state, w_state, State};

use crate::error::{CliError, CliResult};

/// Largest qubit count accepted by the builtin specs; density matrices beyond
/// this do not fit comfortably in memory.
pub const MAX_QUBITS: usize = 12;

fn qubits(text: &str, spec: &str) -> CliResult<usize> {
    let n: usize = text
        .parse()
        .map_err(|_| CliError::invalid(format!("bad qubit count in state spec {spec:?}")))?;
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(CliError::invalid(format!("state spec {spec:?}: qubit count must be in 2..={MAX_QUBITS}")));
    }
    Ok(n)
}

pub fn load_state(spec: &str, renormalize: bool) -> CliResult<State> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let state = match kind {
        "bell" if rest.is_empty() => bell_state().into(),
        "ghz" => ghz_state(qubits(rest, spec)?)?.into(),
        "w" => w_state(qubits(rest, spec)?)?.into(),
        "random" => {
            let (n, seed) = rest
                .split_once(':')
                .ok_or_else(|| CliError::invalid(format!("state spec {spec:?}: expected random:N:SEED")))?;
            let seed: u64 =
                seed.parse().map_err(|_| CliError::invalid(format!("bad seed in state spec {spec:?}")))?;
            random_pure_state(&vec![2; qubits(n, spec)?], seed)?.into()
        }
        "file" if !rest.is_empty() => {
            let path = Path::new(rest);
            let text =
                std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
            parse_state_json(&text, renormalize)?
        }
        _ => {
            return Err(CliError::invalid(format!(
                "unknown state spec {spec:?}; expected ghz:N, w:N, bell, random:N:SEED or file:PATH"
            )))
        }
    };
    Ok(state)
}
