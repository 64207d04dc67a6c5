//! Minimizes the Lieb–Liniger density functional in a harmonic trap and
//! compares the result with the gradient-free limit and the ideal gas.

use bose1d::functional::TrapExponent;
use bose1d::functional::{euler_lagrange_residual, minimize_general, LiebLiniger, MinimizeOptions, TrapSpec};
use bose1d::ll_core::LLEnergyTable;
use bose1d::regimes::{density_parameter, solve_ideal, solve_ll_functional};

fn main() -> bose1d::Result<()> {
    let table = LLEnergyTable::standard();
    let trap = TrapSpec::harmonic(1.0);
    let n = 500.0;
    let gamma = density_parameter(n, 1.0, TrapExponent::harmonic());
    for ratio in [0.1, 1.0, 10.0] {
        let g = ratio * gamma;
        let m = minimize_general(n, &trap, g, table, None, &MinimizeOptions::default())?;
        let limit = solve_ll_functional(n, &trap, g, table)?;
        let residual = euler_lagrange_residual(&m.profile, &trap, &LiebLiniger { g, table }, m.mu, 1e-3);
        println!(
            "g/γ = {ratio:>4}: E = {:.6e} (kinetic {:.2e}), E_LL = {:.6e}, μ = {:.4e}, EL residual {residual:.1e}",
            m.energy.total, m.energy.kinetic, limit.energy, m.mu
        );
    }
    let ideal = solve_ideal(n, &trap, None)?;
    println!("ideal gas: E = {:.6e}", ideal.energy);
    Ok(())
}
