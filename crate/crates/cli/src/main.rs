//! `war`: batch front end for the war-core analyses.
//!
//! Exit status: 0 on success, 1 on a usage or input error, 2 when a checked
//! claim (e.g. `analyze --expect-absorbing`) does not hold.

mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("").trim()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", first_line(&e.to_string()));
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.output.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let report = match commands::run(&cli.command, &cli.output) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", first_line(&format!("{e:#}")));
            return ExitCode::from(1);
        }
    };
    let written = match &cli.output.output {
        Some(path) => fs::write(path, &report.body),
        None => std::io::stdout().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(1);
    }
    match report.claim_failed {
        Some(why) => {
            eprintln!("claim failed: {why}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}
