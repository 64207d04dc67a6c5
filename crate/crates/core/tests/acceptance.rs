//! Acceptance gate: one line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bose1d::functional::{
    euler_lagrange_residual, mean_density, minimize_functional, minimize_general, minimize_local, Grid1D, InitialGuess,
    LiebLiniger, MeanField, MinimizeOptions, Tonks, TrapExponent, TrapSpec,
};
use bose1d::ll_core::{energy_density, energy_density_derivative, LLEnergyTable, TableSpec, FERMI_LIMIT};
use bose1d::numerics::quadrature::integrate;
use bose1d::oracles::{
    bc_chain, delta_smearing_floor, finite_size_e, hardcore_upper_bound, lower_bound_explicit,
    random_superadditive_trial, random_temple_trial,
};
use bose1d::regimes::{
    density_parameter, solve_ll_functional, solve_tf, solve_unit_limit, PointRule, Region, Thresholds,
};
use bose1d::transverse3d::{crossover_ratio, minimize_gp_3d_unit, scattering_length_for, Gp3dGrids};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_budget(start: Instant, budget: Duration) -> std::result::Result<(), String> {
    let used = start.elapsed();
    ensure(used < budget, format!("took {used:.1?}, budget {budget:?}"))
}

fn err(e: bose1d::Error) -> String {
    e.to_string()
}

/// `(4/5)(3/4)^{5/3}`, the harmonic Thomas–Fermi energy at `N = L = g = 1`.
fn tf_unit_energy() -> f64 {
    0.8 * 0.75f64.powf(5.0 / 3.0)
}

fn c1_endpoints() -> Check {
    let start = Instant::now();
    let table = LLEnergyTable::build(TableSpec::default()).map_err(err)?;
    let low = table.eval_e(1e-3).e / 5e-4;
    let high = table.eval_e(1e6).e / FERMI_LIMIT;
    ensure((0.97..=1.0).contains(&low), format!("e(1e-3)/(t/2) = {low}"))?;
    ensure((0.995..=1.0).contains(&high), format!("e(1e6)/(π²/3) = {high}"))?;
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("e(1e-3)/(t/2) = {low:.6}, e(1e6)/(π²/3) = {high:.6}"))
}

fn c2_two_oracles() -> Check {
    let start = Instant::now();
    let table = LLEnergyTable::standard();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in [0.1, 1.0, 10.0] {
        let bethe = finite_size_e(64, t).map_err(err)?;
        let e = table.eval_e(t).e;
        let rel = (bethe - e).abs() / e;
        worst = worst.max(rel);
        parts.push(format!("t={t}: {rel:.2e}"));
    }
    ensure(worst < 0.02, format!("worst relative gap {worst:.3e}"))?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(parts.join(", "))
}

fn c3_thomas_fermi() -> Check {
    let start = Instant::now();
    let table = LLEnergyTable::standard();
    let trap = TrapSpec::harmonic(1.0);
    let target = tf_unit_energy();
    let unit = solve_unit_limit(PointRule::ThomasFermi, TrapExponent::harmonic(), None).map_err(err)?;
    ensure(
        (unit.energy / target - 1.0).abs() < 1e-9,
        format!("TF unit solver {} vs {target}", unit.energy),
    )?;
    let n = 1e7;
    let mut rels = Vec::new();
    for ngl in [1e2, 1e3, 1e4] {
        let g = ngl / n;
        let m = minimize_general(n, &trap, g, table, None, &MinimizeOptions::default()).map_err(err)?;
        let ratio = g / mean_density(&m.profile);
        ensure(ratio < 1e-2, format!("g/ρ̄ = {ratio:.2e} at NgL = {ngl}"))?;
        let scaled = m.energy.total / (n * ngl.powf(2.0 / 3.0));
        rels.push(scaled / target - 1.0);
    }
    ensure(
        rels.windows(2).all(|w| w[1].abs() < w[0].abs()),
        format!("not monotone: {rels:?}"),
    )?;
    ensure(rels[2].abs() < 0.02, format!("{:.3e} off at NgL = 1e4", rels[2]))?;
    within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "relative deviation {:.2e}, {:.2e}, {:.2e} from {target:.6}",
        rels[0], rels[1], rels[2]
    ))
}

fn c4_lieb_liniger() -> Check {
    let start = Instant::now();
    let table = LLEnergyTable::standard();
    let trap = TrapSpec::harmonic(1.0);
    let unit =
        solve_unit_limit(PointRule::LiebLiniger { g: 1.0 }, TrapExponent::harmonic(), Some(table)).map_err(err)?;
    let mut rels = Vec::new();
    for n in [1e2f64, 1e3] {
        let gamma = density_parameter(n, 1.0, TrapExponent::harmonic());
        let m = minimize_general(n, &trap, gamma, table, None, &MinimizeOptions::default()).map_err(err)?;
        rels.push(m.energy.total / (n * gamma * gamma) / unit.energy - 1.0);
    }
    ensure(rels[1].abs() < rels[0].abs(), format!("not approaching: {rels:?}"))?;
    ensure(rels[1].abs() < 0.01, format!("{:.3e} off at N = 1e3", rels[1]))?;
    within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "E^LL(1,1,1) = {:.6}; deviation {:.2e} (N=1e2), {:.2e} (N=1e3)",
        unit.energy, rels[0], rels[1]
    ))
}

fn c5_tonks() -> Check {
    let trap = TrapSpec::harmonic(1.0);
    let grid = Grid1D::symmetric(3.0, 4001).map_err(err)?;
    let r = minimize_local(1.0, &trap, &Tonks, grid, 1e-9, 100_000).map_err(err)?;
    ensure((r.energy - 1.0).abs() < 1e-3, format!("E = {}", r.energy))?;
    ensure((r.mu - 2.0).abs() < 1e-3, format!("μ = {}", r.mu))?;
    Ok(format!("E = {:.7}, μ = {:.7}", r.energy, r.mu))
}

fn c6_scaling() -> Check {
    let table = LLEnergyTable::standard();
    let mut out = Vec::new();

    // E^GP(N,L,g) = (N/L²) E^GP(1,1,NgL) on matched grids
    let (n, l, g) = (50.0, 2.0, 0.3);
    let unit_grid = Grid1D::symmetric(8.0, 1025).map_err(err)?;
    let opts = MinimizeOptions::with_tol(1e-11);
    let unit = minimize_functional(
        1.0,
        &TrapSpec::harmonic(1.0),
        &MeanField { g: n * g * l },
        unit_grid,
        &opts,
    )
    .map_err(err)?;
    let direct =
        minimize_functional(n, &TrapSpec::harmonic(l), &MeanField { g }, unit_grid.scaled(l), &opts).map_err(err)?;
    let rel = direct.energy.total / (n / (l * l) * unit.energy.total) - 1.0;
    ensure(rel.abs() < 1e-12, format!("1D GP scaling off by {rel:.2e}"))?;
    out.push(format!("GP {rel:.1e}"));

    // E^TF(N,L,g) = (N/L²)(NgL)^{2/3} E^TF(1,1,1); harmonic closed form
    // E = (3/5) N μ with μ = (3Ng/4L²)^{2/3}
    let (n, l, g): (f64, f64, f64) = (3.0e4, 1.7, 0.02);
    let closed = 0.6 * n * (0.75 * n * g / (l * l)).powf(2.0 / 3.0);
    let scaled = n / (l * l) * (n * g * l).powf(2.0 / 3.0) * tf_unit_energy();
    let rel_exact = closed / scaled - 1.0;
    ensure(rel_exact.abs() < 1e-12, format!("TF identity off by {rel_exact:.2e}"))?;
    let solved = solve_tf(n, &TrapSpec::harmonic(l), g).map_err(err)?.energy;
    let rel_solved = solved / closed - 1.0;
    ensure(rel_solved.abs() < 1e-6, format!("TF solver off by {rel_solved:.2e}"))?;
    out.push(format!("TF {rel_exact:.1e}/{rel_solved:.1e}"));

    // E^LL(N,L,g) = Nγ² E^LL(1,1,g/γ): the rescaled unit minimizer must
    // solve the Euler–Lagrange equation at (N, L, g) and carry that energy
    let (n, l, g) = (400.0, 1.3, 9.0);
    let trap = TrapSpec::harmonic(l);
    let gamma = density_parameter(n, l, TrapExponent::harmonic());
    let unit = solve_unit_limit(
        PointRule::LiebLiniger { g: g / gamma },
        TrapExponent::harmonic(),
        Some(table),
    )
    .map_err(err)?;
    let sol = solve_ll_functional(n, &trap, g, table).map_err(err)?;
    let mu = gamma * gamma * unit.mu;
    let z0 = sol.support();
    let mut worst_el: f64 = 0.0;
    for k in 1..200 {
        let z = z0 * (k as f64 / 200.0 - 1e-9);
        let rho = sol.density(z);
        let el = energy_density_derivative(rho, g, table) + trap.potential(z) - mu;
        worst_el = worst_el.max(el.abs() / mu);
    }
    ensure(worst_el < 1e-8, format!("LL Euler–Lagrange residual {worst_el:.2e}"))?;
    let integrand = |z: f64| trap.potential(z) * sol.density(z) + energy_density(sol.density(z), g, table);
    let half = integrate(0.0, 1.0, 200, 8, |u| integrand(z0 * (1.0 - u * u)) * 2.0 * z0 * u);
    let rel_ll = 2.0 * half / (n * gamma * gamma * unit.energy) - 1.0;
    ensure(rel_ll.abs() < 1e-6, format!("LL scaling off by {rel_ll:.2e}"))?;
    out.push(format!("LL {rel_ll:.1e} (EL {worst_el:.1e})"));

    // E_3D(1,L,r,a) = E_3D(1,1,r/L,a/L)/L² on matched grids
    let (l, r, a) = (2.0, 0.1, 2e-3);
    let g1 = Gp3dGrids::standard(6.0, 257).map_err(err)?;
    let gl = Gp3dGrids::new(g1.radial, g1.z.scaled(l), g1.modes).map_err(err)?;
    let u = minimize_gp_3d_unit(&TrapSpec::harmonic(1.0), r / l, a / l, &g1, 1e-11, None).map_err(err)?;
    let d = minimize_gp_3d_unit(&TrapSpec::harmonic(l), r, a, &gl, 1e-11, None).map_err(err)?;
    let rel3 = d.reduced_energy / (u.reduced_energy / (l * l)) - 1.0;
    ensure(rel3.abs() < 1e-12, format!("3D GP scaling off by {rel3:.2e}"))?;
    out.push(format!("GP3D {rel3:.1e}"));
    Ok(out.join(", "))
}

fn c7_crossover() -> Check {
    let start = Instant::now();
    let trap = TrapSpec::harmonic(1.0);
    let grids = Gp3dGrids::standard(6.0, 513).map_err(err)?;
    let tol = 1e-9;
    let mut ratios = Vec::new();
    for r in [0.2, 0.1, 0.05] {
        let c = crossover_ratio(&trap, r, scattering_length_for(1.0, r), &grids, tol).map_err(err)?;
        ratios.push(c.ratio);
    }
    ensure(
        ratios.iter().all(|&q| q <= 1.0 + 1e-6),
        format!("upper bound violated: {ratios:?}"),
    )?;
    ensure(
        ratios.windows(2).all(|w| (1.0 - w[1]).abs() < (1.0 - w[0]).abs()),
        format!("not monotone: {ratios:?}"),
    )?;
    ensure(
        (ratios[2] - 1.0).abs() < 0.05,
        format!("ratio {} at r = 0.05", ratios[2]),
    )?;
    within_budget(start, Duration::from_secs(600))?;
    Ok(format!("ratios {:.6}, {:.6}, {:.6}", ratios[0], ratios[1], ratios[2]))
}

fn c8_bound_chain() -> Check {
    let mut violations = Vec::new();
    let mut lower_checked = 0;
    for n in [2usize, 3] {
        for g in [0.1, 1.0, 10.0] {
            let r = bc_chain(n, 1.0, g, 32).map_err(err)?;
            if !r.flags.ordered {
                violations.push(format!("order n={n} g={g}"));
            }
            if let Some(b) = lower_bound_explicit(n, 1.0, g).value() {
                lower_checked += 1;
                if b > r.e_neumann {
                    violations.push(format!("lower n={n} g={g}"));
                }
            }
        }
        let strong = bc_chain(n, 1.0, 1e4, 32).map_err(err)?;
        let cap = hardcore_upper_bound(n, 1.0, 0.0).map_err(err)?;
        if strong.e_dirichlet.is_nan() || strong.e_dirichlet >= cap {
            violations.push(format!("hard core n={n}: {} ≥ {cap}", strong.e_dirichlet));
        }
    }
    ensure(violations.is_empty(), violations.join("; "))?;
    Ok(format!(
        "6 chains ordered, {lower_checked} explicit lower bounds in window, hard-core caps hold"
    ))
}

fn c9_fermion_sum() -> Check {
    for ell in [1.0, 1.7] {
        for n in 1..=10usize {
            let sum: f64 = (1..=n).map(|k| (k * k) as f64).sum();
            let want = PI * PI * sum / (ell * ell);
            let got = hardcore_upper_bound(n, ell, 0.0).map_err(err)?;
            ensure(
                (got - want).abs() <= 4.0 * f64::EPSILON * want,
                format!("n={n}, ℓ={ell}: {got} vs {want}"),
            )?;
        }
    }
    Ok("n = 1..10 at ℓ = 1, 1.7 within 4 ulp".into())
}

fn c10_lemmas() -> Check {
    let coarse = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, 1e-3).map_err(err)?;
    let fine = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, 5e-4).map_err(err)?;
    ensure(
        coarse.min_eigenvalue >= -1e-3,
        format!("floor {}", coarse.min_eigenvalue),
    )?;
    ensure(
        2.0 * fine.min_eigenvalue.abs() <= coarse.min_eigenvalue.abs(),
        format!("refinement {} → {}", coarse.min_eigenvalue, fine.min_eigenvalue),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for trial in 0..100 {
        let r = random_superadditive_trial(&mut rng, 12).map_err(err)?;
        ensure(r.holds, format!("superadditive trial {trial}: {r:?}"))?;
    }
    for trial in 0..1000 {
        let t = random_temple_trial(&mut rng, 5);
        ensure(t.bound <= t.ground + 1e-12, format!("Temple trial {trial}: {t:?}"))?;
    }
    Ok(format!(
        "smearing floor {:.2e} → {:.2e}; 100 superadditive and 1000 Temple trials hold",
        coarse.min_eigenvalue, fine.min_eigenvalue
    ))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn c11_properties() -> Check {
    let start = Instant::now();
    let table = LLEnergyTable::standard();
    let log_t = -4.0f64..6.0;

    run_property(512, (log_t.clone(), 1e-6f64..1.0), |(x, dx)| {
        let (t1, t2) = (10f64.powf(x), 10f64.powf(x + dx));
        prop_assert!(table.eval_e(t2).e >= table.eval_e(t1).e);
        Ok(())
    })
    .map_err(|e| format!("monotonicity: {e}"))?;

    run_property(512, log_t.clone(), |x| {
        let t = 10f64.powf(x);
        prop_assert!(t * table.eval_e(1.0 / t).e <= 0.5 + 1e-9);
        Ok(())
    })
    .map_err(|e| format!("t·e(1/t) ≤ ½: {e}"))?;

    run_property(512, (log_t.clone(), 0.01f64..0.5), |(x, w)| {
        let t = 10f64.powf(x);
        let (a, b) = (t * (1.0 - w), t * (1.0 + w));
        let e = |s: f64| table.eval_e(s).e;
        prop_assert!(e(t) >= 0.5 * (e(a) + e(b)) - 1e-12 * e(t));
        let h = |u: f64| u * u * u * e(1.0 / u);
        let (u, du) = (1.0 / t, w / t);
        prop_assert!(0.5 * (h(u - du) + h(u + du)) >= h(u) - 1e-12 * h(u));
        Ok(())
    })
    .map_err(|e| format!("concavity / convexity of t³e(1/t): {e}"))?;

    run_property(12, (1.0f64..4.0, -2.0f64..1.0), |(log_n, log_g)| {
        let (n, g) = (10f64.powf(log_n), 10f64.powf(log_g));
        let trap = TrapSpec::harmonic(1.0);
        let local = LiebLiniger { g, table };
        let opts = MinimizeOptions::with_tol(1e-10);
        let a = minimize_general(n, &trap, g, table, None, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let residual = euler_lagrange_residual(&a.profile, &trap, &local, a.mu, 1e-3);
        prop_assert!(residual < 1e-5, "Euler–Lagrange residual {residual:e}");
        let uniform = MinimizeOptions {
            init: InitialGuess::Uniform,
            ..opts.clone()
        };
        let b = minimize_functional(n, &trap, &local, a.profile.grid, &uniform)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!((a.energy.total / b.energy.total - 1.0).abs() < 1e-9);
        let gap = a
            .profile
            .values
            .iter()
            .zip(&b.profile.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        prop_assert!(gap < 1e-4 * a.profile.max(), "profiles differ by {gap:e}");
        Ok(())
    })
    .map_err(|e| format!("functional: {e}"))?;

    let th = Thresholds::default();
    run_property(2000, (-3.0f64..6.0, -3.0f64..3.0), |(x, y)| {
        let (ngl, q) = (10f64.powf(x), 10f64.powf(y));
        let r = Region::from_coordinates(ngl, q, &th);
        let expect = if ngl < th.theta1 {
            1
        } else if ngl <= th.theta2 {
            2
        } else if q < th.theta3 {
            3
        } else if q <= th.theta4 {
            4
        } else {
            5
        };
        prop_assert_eq!(r.number(), expect);
        // raising the coupling ratio never moves a point to a weaker region
        let up = Region::from_coordinates(ngl, q * 10.0, &th);
        prop_assert!(up.number() >= r.number());
        Ok(())
    })
    .map_err(|e| format!("classifier: {e}"))?;

    within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "ll_core, functional and classifier suites green in {:.1?}",
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("e(t) endpoints", c1_endpoints),
        ("Lieb-Liniger two-oracle agreement", c2_two_oracles),
        ("Thomas-Fermi limit", c3_thomas_fermi),
        ("Lieb-Liniger limit", c4_lieb_liniger),
        ("Girardeau-Tonks closed form", c5_tonks),
        ("scaling identities", c6_scaling),
        ("3D to 1D crossover", c7_crossover),
        ("few-body bound chain", c8_bound_chain),
        ("hard-core fermion sum", c9_fermion_sum),
        ("smearing, superadditivity and Temple", c10_lemmas),
        ("property suites", c11_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
