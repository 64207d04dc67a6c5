//! Solves the 3D Gross–Pitaevskii problem in an elongated trap and compares
//! it with the 1D functional at the induced coupling as the trap narrows.

use bose1d::functional::TrapSpec;
use bose1d::transverse3d::{crossover_ratio, scattering_length_for, Gp3dGrids};

fn main() -> bose1d::Result<()> {
    let trap = TrapSpec::harmonic(1.0);
    let grids = Gp3dGrids::standard(6.0, 513)?;
    println!(
        "{:>6} {:>10} {:>14} {:>14} {:>10}",
        "r", "a", "E_3D - e⊥", "E_1D", "ratio"
    );
    for r in [0.4, 0.2, 0.1, 0.05] {
        let a = scattering_length_for(1.0, r);
        let c = crossover_ratio(&trap, r, a, &grids, 1e-9)?;
        println!(
            "{r:>6} {a:>10.3e} {:>14.10} {:>14.10} {:>10.7}",
            c.e_3d, c.e_1d, c.ratio
        );
    }
    Ok(())
}
