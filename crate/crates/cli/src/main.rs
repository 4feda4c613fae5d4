mod args;
mod commands;
mod error;
mod files;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;
use crate::error::exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(exit::USAGE),
            };
        }
    };
    let start = Instant::now();
    let code = match commands::run(&cli.command, &cli.global) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("jacobi: {e}");
            e.exit_code()
        }
    };
    if cli.global.timing {
        eprintln!("wall time: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    ExitCode::from(code)
}
