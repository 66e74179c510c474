#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod error;
mod output;
mod suites;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command, Format};
use config::{resolve_coupling, resolve_grid, FileConfig};
use error::CliError;

fn run(args: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let format = args.format.or(file.format).unwrap_or(Format::Json);
    let mu2_of = |m: Option<f64>| m.or(file.mu2).unwrap_or(1.0);
    let steps_of = |s: Option<usize>, d: usize| s.or(file.steps).unwrap_or(d);
    let (report, failed) = match &args.command {
        Command::Solve { coupling } => (commands::solve(&resolve_coupling(coupling, &file, None)?)?, 0),
        Command::Eval { coupling, boundaries, big_x } => {
            (commands::eval(&resolve_coupling(coupling, &file, None)?, boundaries, big_x)?, 0)
        }
        Command::Table { coupling, target, from, to, steps, mu2 } => {
            let choice = resolve_coupling(coupling, &file, None)?;
            (commands::table(&choice, *target, *from, *to, steps_of(*steps, 100), mu2_of(*mu2))?, 0)
        }
        Command::Verify { suite, coupling, max_b, max_l, max_p, max_n, grid, mu2 } => {
            let lambda = coupling.lambda.or(file.lambda);
            let limits = commands::VerifyLimits {
                max_b: max_b.unwrap_or(9),
                max_l: max_l.unwrap_or(4),
                max_p: max_p.unwrap_or(3),
                max_n: max_n.unwrap_or(3),
            };
            commands::verify(*suite, lambda, &limits, &resolve_grid(grid, &file), mu2_of(*mu2))?
        }
        Command::Schwinger { coupling, mu2, separation, scan, steps } => {
            let choice = resolve_coupling(coupling, &file, Some(0.3))?;
            (commands::schwinger(&choice, mu2_of(*mu2), separation, scan.as_deref(), steps_of(*steps, 21))?, 0)
        }
    };
    report.emit(format, args.output.as_deref())?;
    if failed > 0 {
        return Err(CliError::checks_failed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phi3: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
