//! Walks a harmonically trapped gas across the five regions by raising the
//! scattering length, printing the classifier output for each point.

use bose1d::functional::TrapExponent;
use bose1d::regimes::{classify, GasParams, Thresholds};
use bose1d::transverse3d::TransverseKind;

fn main() {
    let th = Thresholds::default();
    println!("{:>9} {:>10} {:>10} {:>10} {:>3} region", "a", "g", "NgL", "g/γ", "#");
    for a in [1e-12, 1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 3e-4] {
        let p = GasParams::new(1e4, 1.0, 1e-3, a, TrapExponent::harmonic(), TransverseKind::Harmonic);
        let r = classify(&p, &th);
        let flags = &r.validity;
        println!(
            "{a:>9.0e} {:>10.3e} {:>10.3e} {:>10.3e} {:>3} {} (energy/gap {:.1e})",
            r.g, r.NgL, r.g_over_gamma, r.region, r.label, flags.energy_per_gap
        );
    }
}
