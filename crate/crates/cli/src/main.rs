use std::process::ExitCode;

use clap::Parser;
use dfqkd_cli::{dispatch, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = dispatch(cli.command);
    match report.status {
        Status::UsageError => eprintln!("{}", report.text),
        _ => println!("{}", report.text),
    }
    ExitCode::from(report.status as u8)
}
