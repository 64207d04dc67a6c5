use std::process::ExitCode;

use bose1d::cli::{exit_code, run, Cli, EXIT_OK};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = cli.into_config().and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            for f in o.report.failures() {
                eprintln!("invariant failed: {}: {}", f.name, f.detail);
            }
            if o.exit_code == EXIT_OK {
                println!("ok: {} invariants passed", o.report.invariants.len());
            }
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
