use std::process::ExitCode;

use clap::Parser;

use foamsl3_cli::{run, Cli, CommandKind, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (kind, args) = match &cli.command {
        foamsl3_cli::Command::Homology(a) => (CommandKind::Homology, a),
        foamsl3_cli::Command::Beta(a) => (CommandKind::Beta, a),
        foamsl3_cli::Command::Psi(a) => (CommandKind::Psi, a),
        foamsl3_cli::Command::CheckInvariance(a) => (CommandKind::CheckInvariance, a),
        foamsl3_cli::Command::Selftest(a) => (CommandKind::Selftest, a),
    };
    let outcome = RunConfig::from_args(kind, args).and_then(|cfg| {
        // library panics are internal faults, not crashes
        std::panic::catch_unwind(|| run(&cfg))
            .unwrap_or_else(|_| Err(foamsl3_cli::CliError::Internal("panic".into())))
            .map(|r| (r, cfg.json))
    });
    match outcome {
        Ok((report, json)) => {
            for d in &report.diagnostics {
                eprintln!("{d}");
            }
            if json {
                println!("{}", report.render(true));
            } else {
                print!("{}", report.render(false));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
