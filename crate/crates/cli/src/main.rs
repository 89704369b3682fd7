//! `curvewind` command-line tool.
//!
//! Exit codes: 0 success, 1 unusable input, 2 invalid flags, 3 file system failure.
//! Verbosity follows `CURVEWIND_LOG` (`error`, `warn`, `info`, `debug`).

mod args;
mod error;
mod experiment;
mod field;
mod output;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use error::CliError;

fn run(cli: &Cli) -> Result<output::OutDir, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let threads = rayon::current_num_threads();
    match cli.experiment {
        Some(name) => experiment::run_experiment(cli, name),
        None => field::run_field(cli, threads),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CURVEWIND_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };

    match run(&cli) {
        Ok(out) => {
            for path in out.written() {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("curvewind: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
