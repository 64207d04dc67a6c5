//! Few-particle checks: the boundary-condition chain on a grid, the explicit
//! lower bound, the hard-core cap, and the periodic Bethe energy.

use bose1d::oracles::{bc_chain, bethe_ground_state, hardcore_upper_bound, lower_bound_explicit};

fn main() -> bose1d::Result<()> {
    for n in [2usize, 3] {
        for g in [0.1, 1.0, 10.0] {
            let r = bc_chain(n, 1.0, g, 32)?;
            let bethe = bethe_ground_state(n, 1.0, g)?;
            println!(
                "n={n} g={g:>4}: E_N={:.6} ≤ E_p={:.6} ≤ E_D={:.6}; Bethe {:.6}; lower {:?}; ordered {}",
                r.e_neumann,
                r.e_periodic,
                r.e_dirichlet,
                bethe.energy,
                lower_bound_explicit(n, 1.0, g).value(),
                r.flags.ordered
            );
        }
        println!("n={n} hard-core cap {:.6}", hardcore_upper_bound(n, 1.0, 0.0)?);
    }
    Ok(())
}
