use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stochastic_relaxation_cli::CliError;

/// Stochastic relaxations: closed forms, Monte Carlo gradients, convexity
/// certificates and graduated descent.
#[derive(Parser)]
#[command(name = "srelax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Objective, closed-form relaxation and Monte Carlo estimate at a point.
    Eval(Common),
    /// Closed-form, score, translation and finite-difference gradients side by side.
    Grad(Common),
    /// Convexity threshold and filtering curve.
    SigmaStar(Common),
    /// Grid-and-probe convexity certificate.
    Certify(Common),
    /// Approximation gaps and concentration masses over scales.
    Consistency(Common),
    /// Threshold growth under random amplitude budgets.
    ThresholdStudy(Common),
    /// Gradient or graduated descent on the relaxation.
    Optimize(Common),
    /// Normalized gradient-flow field of the objective or its relaxation.
    Flowfield(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match cli.command {
        Command::Eval(a) => ("eval", a),
        Command::Grad(a) => ("grad", a),
        Command::SigmaStar(a) => ("sigma-star", a),
        Command::Certify(a) => ("certify", a),
        Command::Consistency(a) => ("consistency", a),
        Command::ThresholdStudy(a) => ("threshold-study", a),
        Command::Optimize(a) => ("optimize", a),
        Command::Flowfield(a) => ("flowfield", a),
    };
    let result = stochastic_relaxation_cli::run(name, &args.config, args.seed).and_then(|report| {
        let text = report.render();
        match &args.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::config(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srelax {name}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
