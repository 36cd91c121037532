use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use supercong_cli::{render, run, Cli, SweepConfig};

const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let cfg = match SweepConfig::from_cli(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let text = render(&report, cfg.format);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("verify: cannot write report: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    eprintln!(
        "verify: {} ({} checks, {} failed, {} ms)",
        if report.pass { "pass" } else { "FAIL" },
        report.summary.checks,
        report.summary.failed_checks,
        report.elapsed_ms
    );
    ExitCode::from(report.exit_code())
}
