use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::config::{Command, RunConfig, SweepKind};
use super::report::Report;
use crate::error::{Error, Result};
use crate::functional::{
    auto_grid, euler_lagrange_residual, mean_density, minimize_general, validity_check, Grid1D, LiebLiniger,
    MinimizeOptions, TrapSpec, ValidityThresholds, DEFAULT_POINTS,
};
use crate::ll_core::{LLEnergyTable, FERMI_LIMIT};
use crate::numerics::logspace;
use crate::oracles::{
    bc_chain, bethe_ground_state, delta_smearing_floor, finite_size_e, hardcore_upper_bound,
    random_superadditive_trial, random_temple_trial, write_bounds_csv, BoundsRecord,
};
use crate::regimes::{
    classify_with, density_parameter, solve_gp_1d, solve_gt, solve_ideal, solve_ll_functional, solve_tf, Region,
    SupportModel,
};
use crate::transverse3d::{crossover_ratio, minimize_gp_3d, scattering_length_for, Gp3dGrids, TransverseMode};

/// Slack on the exact `ratio ≤ 1` direction of the crossover comparison.
const CROSSOVER_SLACK: f64 = 1e-6;

pub(super) fn dispatch(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    match cfg.command {
        Command::Solve => solve(cfg, report),
        Command::Classify => classify(cfg, report),
        Command::Sweep => sweep(cfg, report),
        Command::Oracle => oracle(cfg, report),
        Command::Gp3d => gp3d(cfg, report),
        Command::EOfGamma => e_of_gamma(cfg, report),
    }
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))
}

fn options(cfg: &RunConfig) -> MinimizeOptions {
    match cfg.solver.tol {
        Some(tol) => MinimizeOptions::with_tol(tol),
        None => MinimizeOptions::default(),
    }
}

fn write_table(dir: &Path, name: &str, header: &str, rows: &[Vec<f64>], report: &mut Report) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 24 * header.split(',').count());
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(dir.join(name), text)?;
    report.profiles_written.push(name.to_string());
    Ok(())
}

/// Gnuplot script plotting columns `ys` of `csv` against column `x`.
fn write_gnuplot(cfg: &RunConfig, csv: &str, x: usize, ys: &[usize], logx: bool, report: &mut Report) -> Result<()> {
    if !cfg.gnuplot {
        return Ok(());
    }
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    if logx {
        s.push_str("set logscale x\n");
    }
    let curves: Vec<String> = ys
        .iter()
        .map(|y| format!("'{csv}' using {x}:{y} with linespoints"))
        .collect();
    writeln!(s, "plot {}", curves.join(", \\\n     ")).expect("writing to a string");
    let name = format!("{}.gp", csv.trim_end_matches(".csv"));
    fs::write(cfg.out_dir.join(&name), s)?;
    report.profiles_written.push(name);
    Ok(())
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `|x_{i+1}| < |x_i|` along the sequence.
fn strictly_shrinking(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1].abs() < w[0].abs())
}

fn classify(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let p = cfg.params.as_ref().expect("validated");
    let table = LLEnergyTable::standard();
    let r = classify_with(p, &cfg.thresholds, table, &ValidityThresholds::default());
    let again = Region::from_coordinates(r.NgL, r.g_over_gamma, &cfg.thresholds);
    report.check(
        "region_matches_coordinates",
        again.number() == r.region,
        format!(
            "NgL = {:.6e}, g/γ = {:.6e} → region {}",
            r.NgL, r.g_over_gamma, r.region
        ),
    );
    let v = &r.validity;
    report.check(
        "validity_flags_consistent",
        v.valid == (v.energy_per_gap_ok && v.a_over_r_ok && v.r_over_l_ok && v.diluteness_ok),
        format!("valid = {}", v.valid),
    );
    let warnings = p.warnings();
    if !warnings.is_empty() {
        report.energy("warnings", warnings)?;
    }
    report.regime_report = Some(r);
    Ok(())
}

fn solve(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let p = cfg.params.as_ref().expect("validated");
    let table = LLEnergyTable::standard();
    let mut regime = classify_with(p, &cfg.thresholds, table, &ValidityThresholds::default());
    let g = regime.g;
    let trap = p.trap();
    let opts = options(cfg);
    let n_points = cfg.solver.n_points.unwrap_or(DEFAULT_POINTS);
    let grid = match cfg.solver.domain_half_width {
        Some(w) => Grid1D::symmetric(w, n_points)?,
        None => auto_grid(p.n, &trap, g, SupportModel::LiebLiniger, n_points)?,
    };
    let m = minimize_general(p.n, &trap, g, table, Some(grid), &opts)?;
    let ideal = solve_ideal(p.n, &trap, None)?;
    let (limit_name, limit_energy) = match regime.region() {
        Region::IdealGas => ("ideal", ideal.energy),
        Region::GrossPitaevskii => ("gross-pitaevskii", solve_gp_1d(p.n, &trap, g, None, &opts)?.energy),
        Region::ThomasFermi => ("thomas-fermi", solve_tf(p.n, &trap, g)?.energy),
        Region::LiebLiniger => ("lieb-liniger", solve_ll_functional(p.n, &trap, g, table)?.energy),
        Region::GirardeauTonks => ("girardeau-tonks", solve_gt(p.n, &trap)?.energy),
    };
    let mode = TransverseMode::standard(p.transverse_kind);
    let transverse = p.n * mode.e_perp / (p.r * p.r);

    regime.rhobar_self_consistent = Some(mean_density(&m.profile));
    regime.validity = validity_check(p, &m.profile, table);
    m.profile.save_csv(&cfg.out_dir.join("profile.csv"))?;
    report.profiles_written.push("profile.csv".into());
    write_gnuplot(cfg, "profile.csv", 1, &[2], false, report)?;

    let e = m.energy;
    report.energy("longitudinal", e)?;
    report.energy("mu", m.mu)?;
    report.energy("iterations", m.iterations)?;
    report.energy("ideal", ideal.energy)?;
    report.energy(
        "limit",
        json!({
            "name": limit_name,
            "energy": limit_energy,
            "relative_difference": e.total / limit_energy - 1.0,
        }),
    )?;
    report.energy("transverse", transverse)?;
    report.energy("transverse_gap", mode.gap / (p.r * p.r))?;
    report.energy("total_with_transverse", transverse + e.total)?;

    let mass = m.profile.integral();
    report.check(
        "mass_conserved",
        ((mass - p.n) / p.n).abs() < 1e-8,
        format!("∫ρ = {mass:.12e}, N = {:.12e}", p.n),
    );
    let parts = e.kinetic + e.potential + e.interaction;
    report.check(
        "energy_parts_sum",
        (parts - e.total).abs() <= 1e-12 * e.total.abs().max(1.0),
        format!("{parts:.12e} vs {:.12e}", e.total),
    );
    let el = euler_lagrange_residual(&m.profile, &trap, &LiebLiniger { g, table }, m.mu, 1e-3);
    report.check(
        "euler_lagrange",
        el < 1e-4,
        format!("max relative residual {el:.3e} where ρ > 1e-3 max ρ"),
    );
    report.check(
        "above_ideal_gas",
        e.total >= ideal.energy * (1.0 - 1e-8),
        format!("E = {:.12e}, ideal {:.12e}", e.total, ideal.energy),
    );
    report.regime_report = Some(regime);
    Ok(())
}

fn sweep(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let spec = cfg.sweep_spec();
    let table = LLEnergyTable::standard();
    let opts = options(cfg);
    let trap = TrapSpec::new(spec.s, 1.0);
    let tol = cfg.solver.tol.unwrap_or(1e-9);
    let mut values = spec.values.clone();
    values.sort_by(f64::total_cmp);

    let pool = pool(cfg)?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| -> Result<Vec<f64>> {
                match spec.kind {
                    SweepKind::ThomasFermi => {
                        let n = spec.particles;
                        let g = v / n;
                        let m = minimize_general(n, &trap, g, table, None, &opts)?;
                        let tf = solve_tf(n, &trap, g)?;
                        let scaled = m.energy.total / (n * tf.energy_scale);
                        let rb = mean_density(&m.profile);
                        Ok(vec![
                            v,
                            g,
                            m.energy.total,
                            scaled,
                            tf.unit.energy,
                            scaled / tf.unit.energy - 1.0,
                            g / rb,
                        ])
                    }
                    SweepKind::LiebLiniger => {
                        let gamma = density_parameter(v, 1.0, spec.s);
                        let g = spec.g_over_gamma * gamma;
                        let m = minimize_general(v, &trap, g, table, None, &opts)?;
                        let ll = solve_ll_functional(v, &trap, g, table)?;
                        let scale = v * gamma * gamma;
                        let scaled = m.energy.total / scale;
                        let limit = ll.energy / scale;
                        Ok(vec![v, g, gamma, m.energy.total, scaled, limit, scaled / limit - 1.0])
                    }
                    SweepKind::Crossover => {
                        let a = scattering_length_for(spec.coupling, v);
                        let grids = Gp3dGrids::standard(6.0, 513)?;
                        let c = crossover_ratio(&trap, v, a, &grids, tol)?;
                        Ok(vec![v, a, c.g_grid, c.ratio, c.e_3d, c.e_1d])
                    }
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let dir = &cfg.out_dir;
    match spec.kind {
        SweepKind::ThomasFermi | SweepKind::LiebLiniger => {
            let (header, rel_col, scaled_col) = if spec.kind == SweepKind::ThomasFermi {
                (
                    "NgL,g,energy,scaled_energy,limit_scaled,relative_difference,g_over_rhobar",
                    5,
                    3,
                )
            } else {
                ("N,g,gamma,energy,scaled_energy,limit_scaled,relative_difference", 6, 4)
            };
            write_table(dir, "sweep.csv", header, &rows, report)?;
            write_gnuplot(cfg, "sweep.csv", 1, &[scaled_col + 1, scaled_col + 2], true, report)?;
            let rel: Vec<f64> = rows.iter().map(|r| r[rel_col]).collect();
            report.check(
                "monotone_approach",
                strictly_shrinking(&rel),
                format!("relative differences {}", sci(&rel)),
            );
            report.energy("relative_differences", &rel)?;
            report.energy("limit_scaled", rows[0][scaled_col + 1])?;
        }
        SweepKind::Crossover => {
            write_table(dir, "sweep.csv", "r,a,g_grid,ratio,e_3d,e_1d", &rows, report)?;
            write_gnuplot(cfg, "sweep.csv", 1, &[4], true, report)?;
            let ratios: Vec<f64> = rows.iter().map(|r| r[3]).collect();
            report.check(
                "upper_bound_direction",
                ratios.iter().all(|&q| q <= 1.0 + CROSSOVER_SLACK),
                format!("ratios {ratios:.9?}"),
            );
            // rows run from small to large r; the deviation must grow with r
            let dev: Vec<f64> = ratios.iter().rev().map(|q| 1.0 - q).collect();
            report.check(
                "monotone_approach",
                strictly_shrinking(&dev),
                format!("1 − ratio {}", sci(&dev)),
            );
            report.energy("ratios", &ratios)?;
        }
    }
    report.energy("points", rows.len())?;
    Ok(())
}

fn oracle(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let spec = cfg.oracle_spec();
    let table = LLEnergyTable::standard();
    let pool = pool(cfg)?;
    let dir = &cfg.out_dir;

    let cases: Vec<(usize, f64)> = spec
        .particles
        .iter()
        .flat_map(|&n| spec.couplings.iter().map(move |&g| (n, g)))
        .collect();
    let records: Vec<BoundsRecord> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(n, g)| bc_chain(n, spec.ell, g, spec.cells))
            .collect::<Result<Vec<_>>>()
    })?;
    write_bounds_csv(&records, fs::File::create(dir.join("bounds.csv"))?)?;
    report.profiles_written.push("bounds.csv".into());
    let bad: Vec<String> = records
        .iter()
        .filter(|r| !r.ok)
        .map(|r| format!("(n={}, g={})", r.n, r.g))
        .collect();
    report.check(
        "bound_chain",
        bad.is_empty(),
        format!(
            "{} cases, violations: {}",
            records.len(),
            if bad.is_empty() { "none".into() } else { bad.join(" ") }
        ),
    );

    let mut worst_bethe: f64 = 0.0;
    for r in &records {
        let b = bethe_ground_state(r.n, r.ell, r.g)?.energy;
        let scale = b.abs().max(1e-12);
        worst_bethe = worst_bethe.max((r.e_periodic - b).abs() / scale);
    }
    report.check(
        "periodic_matches_bethe",
        worst_bethe < 1e-2,
        format!("largest relative difference {worst_bethe:.3e}"),
    );

    let mut bethe_rows = Vec::new();
    for &t in &spec.bethe_couplings {
        let e = table.eval_e(t).e;
        let mut rel = Vec::new();
        for &n in &spec.bethe_particles {
            let en = finite_size_e(n, t)?;
            bethe_rows.push(vec![n as f64, t, en, e, en / e - 1.0]);
            rel.push(en / e - 1.0);
        }
        report.check(
            &format!("bethe_convergence_t_{t}"),
            strictly_shrinking(&rel) && rel.last().is_some_and(|r| r.abs() < 0.02),
            format!("e_n/e − 1 = {}", sci(&rel)),
        );
    }
    write_table(
        dir,
        "bethe.csv",
        "n,t,e_n,e_table,relative_difference",
        &bethe_rows,
        report,
    )?;

    let upper: Vec<bool> = (1..=10usize)
        .map(|n| {
            let sum: f64 = (1..=n).map(|k| (k * k) as f64).sum();
            hardcore_upper_bound(n, 1.0, 0.0).is_ok_and(|b| (b - std::f64::consts::PI.powi(2) * sum).abs() <= 1e-13 * b)
        })
        .collect();
    report.check(
        "hardcore_fermion_sum",
        upper.iter().all(|&b| b),
        "R₀ = 0 reproduces π²Σk²/ℓ² for n = 1..10",
    );

    let coarse = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, spec.smearing_mesh)?;
    let fine = delta_smearing_floor(1.0, 1.0, 1.0, 4.0, 2.0, 0.5 * spec.smearing_mesh)?;
    report.check(
        "smearing_floor",
        coarse.min_eigenvalue >= -1e-3 && 2.0 * fine.min_eigenvalue.abs() <= coarse.min_eigenvalue.abs(),
        format!(
            "λ_min = {:.3e} at h, {:.3e} at h/2",
            coarse.min_eigenvalue, fine.min_eigenvalue
        ),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut super_fail = 0;
    for _ in 0..spec.superadditive_trials {
        if !random_superadditive_trial(&mut rng, 12)?.holds {
            super_fail += 1;
        }
    }
    report.check(
        "superadditive_bound",
        super_fail == 0,
        format!(
            "{super_fail} of {} random instances violated",
            spec.superadditive_trials
        ),
    );
    let mut temple_fail = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..spec.temple_trials {
        let t = random_temple_trial(&mut rng, 5);
        tightest = tightest.min(t.ground - t.bound);
        if t.bound > t.ground + 1e-12 {
            temple_fail += 1;
        }
    }
    report.check(
        "temple_bound",
        temple_fail == 0,
        format!(
            "{temple_fail} of {} random matrices violated; smallest margin {tightest:.3e}",
            spec.temple_trials
        ),
    );

    report.energy("bounds", &records)?;
    report.energy("smearing", [coarse, fine])?;
    Ok(())
}

fn gp3d(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let spec = cfg.gp3d_spec();
    let trap = TrapSpec::new(spec.s, spec.length);
    trap.validate()?;
    let a = spec.a.unwrap_or_else(|| scattering_length_for(spec.coupling, spec.r));
    let grids = Gp3dGrids::standard(spec.z_half_width, spec.z_points)?;
    let res = minimize_gp_3d(spec.particles, &trap, spec.r, a, &grids, spec.tol)?;
    // E(N, L, r, a) = (N/L²) E(1, 1, r/L, Na/L)
    let l = spec.length;
    let c = crossover_ratio(&trap, spec.r / l, spec.particles * a / l, &grids, spec.tol)?;
    res.field.save_csv(&cfg.out_dir.join("field.csv"))?;
    report.profiles_written.push("field.csv".into());
    if cfg.gnuplot {
        let s = "set datafile separator ','\nset key autotitle columnhead\nset view map\nsplot 'field.csv' using 2:1:3 with points palette pointtype 5 pointsize 0.3\n";
        fs::write(cfg.out_dir.join("field.gp"), s)?;
        report.profiles_written.push("field.gp".into());
    }
    report.energy("energy_3d", res.energy)?;
    report.energy("reduced_energy_3d", res.reduced_energy)?;
    report.energy("mu", res.mu)?;
    report.energy("scattering_length", a)?;
    report.energy("crossover", c)?;
    report.energy("iterations", res.iterations)?;

    let mass = res.field.mass();
    report.check(
        "mass_conserved",
        ((mass - spec.particles) / spec.particles).abs() < 1e-6,
        format!("∫|Φ|² = {mass:.9e}"),
    );
    report.check(
        "upper_bound_direction",
        c.ratio <= 1.0 + CROSSOVER_SLACK,
        format!("(E_3D − e⊥/r²)/E_1D = {:.9}", c.ratio),
    );
    report.check(
        "residual",
        res.residual <= spec.tol * 10.0,
        format!("final residual {:.3e}", res.residual),
    );
    Ok(())
}

fn e_of_gamma(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let spec = cfg.e_of_gamma_spec();
    let table = LLEnergyTable::standard();
    let ts = logspace(spec.t_min, spec.t_max, spec.points);
    let rows: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| {
            let p = table.eval_e(t);
            vec![t, p.e, p.e_prime]
        })
        .collect();
    write_table(&cfg.out_dir, "e_of_gamma.csv", "t,e,e_prime", &rows, report)?;
    write_gnuplot(cfg, "e_of_gamma.csv", 1, &[2], true, report)?;
    report.check(
        "monotone",
        rows.windows(2).all(|w| w[1][1] > w[0][1]) && rows.iter().all(|r| r[2] > 0.0),
        "e increasing with positive slope",
    );
    report.check(
        "bounded",
        rows.iter().all(|r| r[1] <= 0.5 * r[0] && r[1] < FERMI_LIMIT),
        "e(t) ≤ min(t/2, π²/3)",
    );
    report.energy("e_min", rows[0][1])?;
    report.energy("e_max", rows[rows.len() - 1][1])?;
    Ok(())
}
