use std::process::ExitCode;

use clap::Parser;
use sqzphase_cli::config::{Cli, RunConfig};
use sqzphase_cli::{emit, run, EXIT_CONFIG, EXIT_NUMERIC};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::resolve(cli.command, cli.flags) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = match run(&cfg).and_then(|report| emit(&cfg, &report).map(|_| report)) {
        Ok(report) => report,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code());
        }
    };
    match report.failure {
        Some(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
        None => ExitCode::SUCCESS,
    }
}
