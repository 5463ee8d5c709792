//! Command-line front end: `qmono measure | monogamy | fig1 | audit`.
//!
//! Exit codes: 0 success, 2 parse or validation failure, 3 unsupported measure
//! route, 4 theorem violation or failed invariant.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod states;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::ConfigFile;
use crate::error::{CliError, EXIT_INVALID, EXIT_OK};

/// Parses `argv` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let result = (|| {
        let cfg = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        match &cli.command {
            Command::Measure(a) => commands::measure::run(a, &cfg, stdout),
            Command::Monogamy(a) => commands::monogamy::run(a, &cfg, stdout, stderr),
            Command::Fig1(a) => commands::fig1::run(a, &cfg, stdout),
            Command::Audit(a) => commands::audit::run(a, &cfg, stdout, stderr),
        }
    })();
    result.unwrap_or_else(|e: CliError| {
        let _ = writeln!(stderr, "error: {e}");
        e.exit_code()
    })
}
