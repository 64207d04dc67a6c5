//! Builds the Lieb–Liniger energy table and compares it with finite Bethe
//! chains and the weak/strong coupling series.

use bose1d::ll_core::{strong_series, weak_series, LLEnergyTable, TableSpec};
use bose1d::oracles::finite_size_e;

fn main() -> bose1d::Result<()> {
    let table = LLEnergyTable::build(TableSpec::default())?;
    table.check_invariants()?;
    let (lo, hi) = table.switch_points();
    println!(
        "{} knots, series used below t = {lo:.3e} and above t = {hi:.3e}",
        table.knots().len()
    );

    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>14}",
        "t", "e(t)", "e'(t)", "Bethe n=64", "series"
    );
    for t in [1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3] {
        let p = table.eval_e(t);
        let bethe = if (0.1..=10.0).contains(&t) {
            finite_size_e(64, t)?
        } else {
            f64::NAN
        };
        let series = if t <= lo {
            weak_series(t).0
        } else if t >= hi {
            strong_series(t).0
        } else {
            f64::NAN
        };
        println!(
            "{t:>8.0e} {:>14.10} {:>14.10} {bethe:>14.10} {series:>14.10}",
            p.e, p.e_prime
        );
    }
    Ok(())
}
