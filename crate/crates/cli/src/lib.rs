#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Std companion of `stochastic-relaxation`: JSON run configurations, CSV
//! reports, thread-parallel execution, and the `srelax` subcommands.

pub mod commands;
pub mod config;
mod error;
pub mod flowfield;
pub mod parallel;
pub mod report;

pub use error::{CliError, CliResult};

use std::path::Path;

/// Subcommand names.
pub const COMMANDS: [&str; 8] =
    ["eval", "grad", "sigma-star", "certify", "consistency", "threshold-study", "optimize", "flowfield"];

/// Reads the config at `path`, runs `command`, and returns the report.
pub fn run(command: &str, path: &Path, seed: Option<u64>) -> CliResult<report::Report> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    run_text(command, &text, seed)
}

pub fn run_text(command: &str, text: &str, seed: Option<u64>) -> CliResult<report::Report> {
    use config::parse;
    match command {
        "eval" => commands::eval(parse(text)?, seed),
        "grad" => commands::grad(parse(text)?, seed),
        "sigma-star" => commands::sigma_star_cmd(parse(text)?, seed),
        "certify" => commands::certify(parse(text)?, seed),
        "consistency" => commands::consistency(parse(text)?, seed),
        "threshold-study" => commands::threshold_study(parse(text)?, seed),
        "optimize" => commands::optimize(parse(text)?, seed),
        "flowfield" => commands::flowfield(parse(text)?, seed),
        other => Err(CliError::config(format!("unknown command `{other}`"))),
    }
}
