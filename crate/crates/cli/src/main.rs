use std::process::ExitCode;

use atomc_cli::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    match atomc_cli::run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
