mod args;
mod commands;
mod model;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Verdict;

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match cli.command {
        Command::Certify(m) => commands::certify(&m),
        Command::Eval { model, points } => commands::eval(&model, &points),
        Command::Grid { model, resolution } => commands::grid(&model, resolution as usize),
        Command::Regions(m) => commands::regions(&m),
        Command::Compare {
            model,
            resolution,
            density,
        } => commands::compare(&model, resolution as usize, density),
        Command::Catalog(out) => commands::catalog_listing(&out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Violated) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
