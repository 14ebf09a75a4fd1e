use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sptinv_cli::{configure_workers, emit_report, run, Cli, Report, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::InputError.exit_code() as u8),
            };
        }
    };
    let report = match configure_workers() {
        Ok(()) => run(&cli.command),
        Err(e) => Report::error(cli.command.name(), &e),
    };
    let out = emit_report(&report, cli.format, cli.timing);
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(report.exit_code() as u8)
}
