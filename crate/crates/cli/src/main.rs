//! `bgamma`: command-line front end for the bilateral-gamma library.

mod cli;
mod commands;
mod config;
mod failure;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use commands::Outcome;
use config::{resolve, Overrides};
use failure::Failure;

fn run(cli: Cli) -> Result<(Outcome, Option<std::path::PathBuf>), Failure> {
    let mut flags = Overrides { params: cli.params, output: cli.output, ..Default::default() };
    let name = match &cli.command {
        Command::Pdf(_) => "pdf",
        Command::Cdf(_) => "cdf",
        Command::Quantile(_) => "quantile",
        Command::Moments => "moments",
        Command::Mode => "mode",
        Command::Classify => "classify",
        Command::Sample { n, seed } => {
            flags.n = *n;
            flags.seed = *seed;
            "sample"
        }
        Command::Fit { input, seed, starts } => {
            flags.input = input.clone();
            flags.seed = *seed;
            flags.starts = *starts;
            "fit"
        }
        Command::PlotData { grid_min, grid_max, grid_count } => {
            flags.grid_min = *grid_min;
            flags.grid_max = *grid_max;
            flags.grid_count = *grid_count;
            "plot-data"
        }
        Command::Verify { tolerance_scale } => {
            flags.tolerance_scale = *tolerance_scale;
            "verify"
        }
    };
    let mut cfg = resolve(name, cli.config.as_deref(), flags)?;
    let outcome = match &cli.command {
        Command::Pdf(a) => commands::pdf_cmd(&cfg, &a.x),
        Command::Cdf(a) => commands::cdf_cmd(&cfg, &a.x),
        Command::Quantile(a) => commands::quantile_cmd(&cfg, &a.u),
        Command::Moments => commands::moments_cmd(&cfg),
        Command::Mode => commands::mode_cmd(&cfg),
        Command::Classify => commands::classify_cmd(&cfg),
        Command::Sample { .. } => commands::sample_cmd(&mut cfg),
        Command::Fit { .. } => commands::fit_cmd(&mut cfg),
        Command::PlotData { .. } => commands::plot_data_cmd(&mut cfg),
        Command::Verify { .. } => commands::verify_cmd(&mut cfg),
    }?;
    Ok((outcome, cfg.output))
}

fn report(f: &Failure) -> ExitCode {
    let _ = writeln!(std::io::stderr(), "code:{} {}: {}", f.code(), f.label(), f.message());
    ExitCode::from(f.code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return report(&Failure::Usage(msg.trim_end().replace('\n', " | ")));
        }
    };
    match run(cli) {
        Ok((outcome, path)) => {
            let written = match &path {
                Some(p) => std::fs::write(p, &outcome.text)
                    .map_err(|e| Failure::Data(format!("cannot write {}: {e}", p.display()))),
                None => std::io::stdout()
                    .write_all(outcome.text.as_bytes())
                    .map_err(|e| Failure::Data(format!("cannot write output: {e}"))),
            };
            if let Err(f) = written {
                return report(&f);
            }
            match outcome.failure {
                Some(f) => report(&f),
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => report(&f),
    }
}
