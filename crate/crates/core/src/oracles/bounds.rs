use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An explicit lower bound, or the reason it says nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExplicitBound {
    Value { value: f64 },
    Vacuous { reason: String },
}

impl ExplicitBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            ExplicitBound::Value { value } => Some(*value),
            ExplicitBound::Vacuous { .. } => None,
        }
    }
}

/// Smeared-interaction Temple estimate for the Neumann ground state of `n`
/// bosons on `[0, ℓ]`:
/// `½n(n−1)(g/ℓ)(1 − 𝓡 − π𝓡^{3/2}/(6√n))(1 − 𝓡/(1 − 𝓡²))`, `𝓡 = √(n²ℓg)/π`.
///
/// The Temple factor must be positive for the estimate to hold; when it is
/// not, the result is vacuous even though the product may be positive.
pub fn lower_bound_explicit(n: usize, ell: f64, g: f64) -> ExplicitBound {
    let nf = n as f64;
    if g == 0.0 {
        return ExplicitBound::Value { value: 0.0 };
    }
    let r = (nf * nf * ell * g).sqrt() / PI;
    if r >= 1.0 {
        return ExplicitBound::Vacuous {
            reason: format!("R = {r:.4} ≥ 1"),
        };
    }
    if PI * PI / (ell * ell) <= nf * (nf - 1.0) * g / ell {
        return ExplicitBound::Vacuous {
            reason: "interaction exceeds the Neumann gap".into(),
        };
    }
    let temple = 1.0 - r / (1.0 - r * r);
    if temple <= 0.0 {
        return ExplicitBound::Vacuous {
            reason: format!("Temple factor {temple:.4} ≤ 0"),
        };
    }
    let smear = 1.0 - r - PI / (6.0 * nf.sqrt()) * r.powf(1.5);
    ExplicitBound::Value {
        value: 0.5 * nf * (nf - 1.0) * g / ell * smear * temple,
    }
}

/// Upper bound on the Dirichlet energy of `n` particles with hard cores of
/// range `r0`: `(π²/3)(n³/ℓ²)(1 + 1/n)(1 + 1/2n)/(1 − (n−1)R₀/ℓ)²`.
pub fn hardcore_upper_bound(n: usize, ell: f64, r0: f64) -> Result<f64> {
    let nf = n as f64;
    let excluded = (nf - 1.0) * r0;
    if n == 0 || !(ell > 0.0) || r0 < 0.0 || excluded >= ell {
        return Err(Error::Precondition(format!(
            "hard-core bound needs n ≥ 1, ℓ > 0 and (n−1)R₀ < ℓ; got n = {n}, ℓ = {ell}, R₀ = {r0}"
        )));
    }
    let shrink = 1.0 - excluded / ell;
    // n³(1 + 1/n)(1 + 1/2n) = n(n+1)(2n+1)/2, written so R₀ = 0 is exact
    let sum_sq = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0;
    Ok(PI * PI * sum_sq / (ell * ell) / (shrink * shrink))
}

/// `E₀ ≥ ⟨H⟩ − (⟨H²⟩ − ⟨H⟩²)/(E₁ − ⟨H⟩)` for any `E₁` not above the first
/// excited level.
pub fn temple_lower_bound(mean_h: f64, mean_h2: f64, e1: f64) -> Result<f64> {
    if !(mean_h < e1) {
        return Err(Error::Precondition(format!(
            "Temple needs ⟨H⟩ < E₁; got {mean_h} ≥ {e1}"
        )));
    }
    let variance = mean_h2 - mean_h * mean_h;
    if variance < -1e-12 * mean_h2.abs().max(1.0) {
        return Err(Error::Precondition(format!("negative variance {variance:.3e}")));
    }
    Ok(mean_h - variance.max(0.0) / (e1 - mean_h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TempleTrial {
    pub bound: f64,
    pub ground: f64,
}

/// Temple bound for a random symmetric `dim × dim` matrix with entries in
/// `[−1, 1]` and a perturbed ground vector as trial state, using the exact
/// first excited level. Trial states with `⟨H⟩ ≥ E₁` are redrawn.
pub fn random_temple_trial<R: Rng>(rng: &mut R, dim: usize) -> TempleTrial {
    loop {
        let a = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        let h: DMatrix<f64> = (&a + a.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let (e0, e1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
        let ground = eig.eigenvectors.column(order[0]).into_owned();
        let noise = DVector::from_fn(dim, |_, _| rng.random_range(-0.3..0.3));
        let v: DVector<f64> = (ground + noise).normalize();
        let hv = &h * &v;
        if let Ok(bound) = temple_lower_bound(v.dot(&hv), hv.dot(&hv), e1) {
            return TempleTrial { bound, ground: e0 };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn explicit_bound_weak_pair() {
        let b = lower_bound_explicit(2, 1.0, 0.01).value().unwrap();
        // direct evaluation of the closed form
        let r: f64 = 0.2 / PI;
        let want = 0.01 * (1.0 - r - PI / (6.0 * 2f64.sqrt()) * r.powf(1.5)) * (1.0 - r / (1.0 - r * r));
        assert_relative_eq!(b, want, max_relative = 1e-14);
        assert!((b - 0.008709).abs() < 1e-5, "{b}");
        assert_eq!(lower_bound_explicit(3, 1.0, 0.0).value(), Some(0.0));
    }

    #[test]
    fn explicit_bound_vacuous_outside_window() {
        assert!(lower_bound_explicit(2, 1.0, 10.0).value().is_none());
        assert!(lower_bound_explicit(3, 1.0, 1.0).value().is_none());
        assert!(lower_bound_explicit(3, 1.0, 0.1).value().is_some());
    }

    #[test]
    fn hardcore_reduces_to_fermion_sum() {
        for n in 1..=10usize {
            let sum: f64 = (1..=n).map(|k| (k * k) as f64).sum();
            assert_eq!(hardcore_upper_bound(n, 1.0, 0.0).unwrap(), PI * PI * sum);
        }
        assert_relative_eq!(
            hardcore_upper_bound(2, 1.0, 0.0).unwrap(),
            5.0 * PI * PI,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            hardcore_upper_bound(2, 1.0, 0.4).unwrap(),
            5.0 * PI * PI / 0.36,
            max_relative = 1e-14
        );
        assert!(hardcore_upper_bound(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn temple_examples() {
        assert_eq!(temple_lower_bound(0.5, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(temple_lower_bound(1.5, 2.25, 3.0).unwrap(), 1.5);
        assert!(temple_lower_bound(2.0, 5.0, 2.0).is_err());
    }

    #[test]
    fn temple_never_exceeds_ground_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let t = random_temple_trial(&mut rng, 5);
            assert!(t.bound <= t.ground + 1e-12, "{t:?}");
        }
    }
}
