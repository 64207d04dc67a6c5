use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `x[x − 1]₊`, the convex profile used with `λ = 4`.
pub fn excess_pairs(x: f64) -> f64 {
    x * (x - 1.0).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperadditiveCheck {
    /// `M·L(N/M)·K(⌈λN/M⌉)`.
    pub bound: f64,
    /// Minimum of `Σ c_n E(n)` over integer box occupations (partitions of
    /// `N` into at most `M` parts).
    pub integer_minimum: f64,
    /// Minimum over real `c_n ≥ 0` with `Σc_n ≤ M`, `Σ n c_n = N`, `n`
    /// within the supplied range of `E`.
    pub relaxed_minimum: f64,
    pub holds: bool,
}

const HYPOTHESIS_TOL: f64 = 1e-12;

fn check_hypotheses(energy: &[f64], l: &dyn Fn(f64) -> f64, k: &dyn Fn(f64) -> f64, lambda: f64) -> Result<()> {
    let fail = |what: String| Err(Error::Precondition(what));
    if !(lambda > 1.0) {
        return fail(format!("λ = {lambda} must exceed 1"));
    }
    let top = energy.len() - 1;
    for n1 in 0..=top {
        if energy[n1] < 0.0 {
            return fail(format!("E({n1}) is negative"));
        }
        for n2 in n1..=top - n1 {
            let slack = energy[n1 + n2] - energy[n1] - energy[n2];
            if slack < -HYPOTHESIS_TOL * energy[n1 + n2].abs().max(1.0) {
                return fail(format!("E not superadditive at ({n1}, {n2})"));
            }
        }
    }
    if l(0.0) != 0.0 {
        return fail("L(0) ≠ 0".into());
    }
    // probe convexity, the derivative condition and monotonicity of K on a fine grid
    let x_max = lambda * top as f64;
    let steps = 4000;
    let dx = x_max / steps as f64;
    let eps = 1e-7 * dx;
    for i in 1..steps {
        let x = i as f64 * dx;
        if l(x - dx) + l(x + dx) - 2.0 * l(x) < -1e-9 * l(x + dx).abs().max(1.0) {
            return fail(format!("L not convex near {x}"));
        }
        let right = (l(x + eps) - l(x)) / eps;
        if right > l(lambda * x) / (2.0 * lambda * x) + 1e-5 * right.abs().max(1.0) {
            return fail(format!("L'(x) > L(λx)/(2λx) at x = {x}"));
        }
        if k(x + dx) > k(x) + HYPOTHESIS_TOL * k(x).abs().max(1.0) {
            return fail(format!("K increasing near {x}"));
        }
    }
    for (n, &e) in energy.iter().enumerate() {
        let x = n as f64;
        if e < l(x) * k(x) - HYPOTHESIS_TOL * e.abs().max(1.0) {
            return fail(format!("E({n}) < L({n})K({n})"));
        }
    }
    Ok(())
}

fn integer_minimum(energy: &[f64], boxes: usize, particles: usize) -> f64 {
    // partitions of `left` into at most `slots` parts no larger than `cap`
    fn walk(energy: &[f64], left: usize, slots: usize, cap: usize) -> f64 {
        if left == 0 {
            return 0.0;
        }
        if slots == 0 {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        let first = cap.min(left);
        for part in (1..=first).rev() {
            if part * slots < left {
                break;
            }
            if part < energy.len() {
                best = best.min(energy[part] + walk(energy, left - part, slots - 1, part));
            }
        }
        best
    }
    walk(energy, particles, boxes, particles)
}

fn relaxed_minimum(energy: &[f64], boxes: f64, particles: f64) -> f64 {
    // the linear program's vertices have one or two occupied sizes
    let top = energy.len() - 1;
    let mut best = f64::INFINITY;
    for (n, &e) in energy.iter().enumerate().skip(1) {
        let c = particles / n as f64;
        if c <= boxes + 1e-12 {
            best = best.min(c * e);
        }
    }
    for n1 in 0..=top {
        for n2 in n1 + 1..=top {
            // c1 + c2 = M, n1 c1 + n2 c2 = N
            let c2 = (particles - n1 as f64 * boxes) / (n2 - n1) as f64;
            let c1 = boxes - c2;
            if c1 >= -1e-12 && c2 >= -1e-12 {
                best = best.min(c1.max(0.0) * energy[n1] + c2.max(0.0) * energy[n2]);
            }
        }
    }
    best
}

/// Checks the superadditivity lemma for `M` boxes and `N` particles against
/// brute force. `energy[n]` is `E(n)` for `n = 0..`, and must reach at least
/// `N`.
pub fn superadditive_bound(
    energy: &[f64],
    boxes: usize,
    particles: usize,
    l: &dyn Fn(f64) -> f64,
    k: &dyn Fn(f64) -> f64,
    lambda: f64,
) -> Result<SuperadditiveCheck> {
    if boxes == 0 || energy.len() <= particles {
        return Err(Error::InvalidInput(format!(
            "need M ≥ 1 and E up to n = {particles}; got M = {boxes}, {} values",
            energy.len()
        )));
    }
    check_hypotheses(energy, l, k, lambda)?;
    let (m, n) = (boxes as f64, particles as f64);
    let bound = m * l(n / m) * k((lambda * n / m).ceil());
    let integer_minimum = integer_minimum(energy, boxes, particles);
    let relaxed_minimum = relaxed_minimum(energy, m, n);
    let tol = 1e-12 * relaxed_minimum.abs().max(1.0);
    Ok(SuperadditiveCheck {
        bound,
        integer_minimum,
        relaxed_minimum,
        holds: bound <= relaxed_minimum + tol && relaxed_minimum <= integer_minimum + tol,
    })
}

/// The largest decreasing `K` with `E(n) ≥ L(n)K(n)` on the supplied range:
/// `K(x) = min over 2 ≤ m ≤ x of E(m)/L(m)`.
pub fn tightest_k(energy: &[f64], l: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    let mut running = Vec::with_capacity(energy.len());
    let mut best = f64::INFINITY;
    for (m, &e) in energy.iter().enumerate() {
        let lm = l(m as f64);
        if m >= 2 && lm > 0.0 {
            best = best.min(e / lm);
        }
        running.push(best);
    }
    let first = running.get(2).copied().unwrap_or(0.0);
    move |x: f64| {
        if x < 2.0 {
            first
        } else {
            let i = (x.floor() as usize).min(running.len() - 1);
            running[i]
        }
    }
}

/// Random convex `E` on `0..=top` with `E(0) = 0`; convexity with
/// `E(0) = 0` implies superadditivity.
pub fn random_convex_energy<R: Rng>(rng: &mut R, top: usize) -> Vec<f64> {
    let mut e = Vec::with_capacity(top + 1);
    e.push(0.0);
    let mut step = rng.random_range(0.0..1.0);
    for _ in 0..top {
        e.push(e.last().unwrap() + step);
        step += rng.random_range(0.0..2.0);
    }
    e
}

/// One randomized instance: `M ≤ 4` boxes, `N ≤ max_particles`, random
/// convex `E`, `L(x) = x[x−1]₊`, `λ = 4` and the tightest admissible `K`.
pub fn random_superadditive_trial<R: Rng>(rng: &mut R, max_particles: usize) -> Result<SuperadditiveCheck> {
    let lambda = 4.0;
    let particles = rng.random_range(1..=max_particles);
    let boxes = rng.random_range(1..=4);
    let energy = random_convex_energy(rng, 4 * max_particles);
    let k = tightest_k(&energy, excess_pairs);
    superadditive_bound(&energy, boxes, particles, &excess_pairs, &k, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_energy(top: usize) -> Vec<f64> {
        (0..=top).map(|n| (n * n.saturating_sub(1)) as f64).collect()
    }

    #[test]
    fn two_particles_two_boxes_is_vacuous() {
        let r = superadditive_bound(&pair_energy(12), 2, 2, &excess_pairs, &|_| 1.0, 4.0).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn six_particles_two_boxes() {
        let r = superadditive_bound(&pair_energy(12), 2, 6, &excess_pairs, &|_| 1.0, 4.0).unwrap();
        assert_eq!(r.bound, 12.0);
        assert_eq!(r.integer_minimum, 12.0);
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn hypothesis_failures_are_reported() {
        let concave: Vec<f64> = (0..=6).map(|n| (n as f64).sqrt()).collect();
        let err = superadditive_bound(&concave, 2, 4, &excess_pairs, &|_| 0.0, 4.0).unwrap_err();
        assert!(err.to_string().contains("superadditive"), "{err}");
        let err = superadditive_bound(&pair_energy(6), 2, 4, &|x: f64| x.powf(1.5), &|_| 1.0, 4.0).unwrap_err();
        assert!(err.to_string().contains("L'"), "{err}");
    }

    #[test]
    fn tightest_k_is_decreasing_and_admissible() {
        let e = pair_energy(10);
        let k = tightest_k(&e, excess_pairs);
        for (n, &en) in e.iter().enumerate() {
            assert!(en >= excess_pairs(n as f64) * k(n as f64) - 1e-12);
        }
        assert_eq!(k(5.0), 1.0);
    }

    #[test]
    fn random_instances_hold() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let r = random_superadditive_trial(&mut rng, 12).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
