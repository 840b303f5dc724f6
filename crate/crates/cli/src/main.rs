use std::io::Write;
use std::process::ExitCode;

use catfill_cli::{run, write_atomic, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("catfill: {e}");
            return ExitCode::from(e.code() as u8);
        }
    };
    let written = match &config.out {
        Some(path) => write_atomic(path, &outcome.rendered).map_err(|e| format!("--out {}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.rendered.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("catfill: {e}");
        return ExitCode::from(2);
    }
    for c in outcome.report.summary.checks.iter().filter(|c| !c.passed) {
        eprintln!("catfill: check {} failed: {}", c.name, c.detail);
    }
    ExitCode::from(outcome.code as u8)
}
