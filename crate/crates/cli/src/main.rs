use std::process::ExitCode;

use clap::Parser;
use dirty_mac_cli::{run, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(outcome) if outcome.passed() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
