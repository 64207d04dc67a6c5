//! Drives the command-line pipeline from code: builds a sweep configuration,
//! saves it as JSON, reloads it and runs it into a temporary directory.

use bose1d::cli::{run, Command, RunConfig, SweepKind, SweepSpec};

fn main() -> bose1d::Result<()> {
    let out = std::env::temp_dir().join("bose1d-example");
    let mut cfg = RunConfig::new(Command::Sweep);
    cfg.out_dir = out.clone();
    cfg.sweep = Some(SweepSpec {
        kind: SweepKind::ThomasFermi,
        values: vec![1e2, 1e3, 1e4],
        ..cfg.sweep_spec()
    });
    let path = out.with_extension("json");
    std::fs::write(&path, cfg.to_json()?)?;
    let outcome = run(&RunConfig::load(&path)?)?;
    for inv in &outcome.report.invariants {
        println!(
            "{:<24} {} {}",
            inv.name,
            if inv.pass { "pass" } else { "FAIL" },
            inv.detail
        );
    }
    println!("wrote {} (exit code {})", out.display(), outcome.exit_code);
    Ok(())
}
