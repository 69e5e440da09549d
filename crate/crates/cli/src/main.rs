use clap::Parser;
use sobolev_cli::{emit, output_args, run, CliError};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = sobolev_cli::args::Cli::parse();
    let result = run(&cli).and_then(|report| {
        emit(&report, output_args(&cli))?;
        if report.failures > 0 {
            return Err(CliError::ValidationFailed(report.failures));
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sobolev: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
