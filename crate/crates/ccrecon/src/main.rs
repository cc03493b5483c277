use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = ccrecon::cli::Cli::parse();
    match ccrecon::cli::run(args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
