//! Symmetric tridiagonal matrices: linear solves, Sturm-sequence bisection
//! for individual eigenvalues, and inverse iteration for eigenvectors.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Gershgorin bounds on the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let b2 = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            d = self.diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to roundoff.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.spectral_bounds();
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift) x = rhs` by Gaussian elimination without pivoting.
    /// Returns `None` unless every pivot is positive, i.e. unless
    /// `T - shift` is positive definite.
    pub fn solve_spd_shifted(&self, shift: f64, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let mut piv = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut d = self.diag[i] - shift;
            let mut r = rhs[i];
            if i > 0 {
                let l = self.off[i - 1] / piv[i - 1];
                d -= l * self.off[i - 1];
                r -= l * y[i - 1];
            }
            if !(d > 0.0) {
                return None;
            }
            piv[i] = d;
            y[i] = r;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut r = y[i];
            if i + 1 < n {
                r -= self.off[i] * x[i + 1];
            }
            x[i] = r / piv[i];
        }
        Some(x)
    }

    /// Solves `(T - shift) x = rhs` for a possibly indefinite shift using
    /// partial pivoting (LU on the band).
    pub fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        // band storage: row i holds (a: sub, b: diag, c: super, d: second super)
        let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { self.off[i - 1] } else { 0.0 }).collect();
        let mut dia: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let mut sup: Vec<f64> = (0..n).map(|i| if i + 1 < n { self.off[i] } else { 0.0 }).collect();
        let mut sup2 = vec![0.0; n];
        let mut b = rhs.to_vec();
        let tiny = 1e-300;
        for i in 0..n.saturating_sub(1) {
            // candidate pivots: row i (dia[i]) and row i+1 (sub[i+1])
            if sub[i + 1].abs() > dia[i].abs() {
                // swap rows i and i+1
                std::mem::swap(&mut dia[i], &mut sub[i + 1]);
                std::mem::swap(&mut sup[i], &mut dia[i + 1]);
                std::mem::swap(&mut sup2[i], &mut sup[i + 1]);
                b.swap(i, i + 1);
            }
            let p = if dia[i].abs() < tiny { tiny } else { dia[i] };
            dia[i] = p;
            let l = sub[i + 1] / p;
            sub[i + 1] = 0.0;
            dia[i + 1] -= l * sup[i];
            sup[i + 1] -= l * sup2[i];
            b[i + 1] -= l * b[i];
        }
        if n > 0 && dia[n - 1].abs() < tiny {
            dia[n - 1] = tiny;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut r = b[i];
            if i + 1 < n {
                r -= sup[i] * x[i + 1];
            }
            if i + 2 < n {
                r -= sup2[i] * x[i + 2];
            }
            x[i] = r / dia[i];
        }
        x
    }

    /// Eigenvector for the eigenvalue `lambda` (as returned by
    /// [`SymTridiag::eigenvalue`]) by inverse iteration, normalised to unit
    /// Euclidean norm with a nonnegative sum.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.spectral_bounds();
        let shift = lambda - 1e-10 * (hi - lo).max(1e-300);
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..4 {
            let mut w = self.solve_shifted(shift, &v);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            v = w;
        }
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn dirichlet_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in [0, 1, 7, 49] {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn eigenvector_matches_sine() {
        let n = 40;
        let t = laplacian(n);
        let v = t.eigenvector(t.eigenvalue(0));
        let s: Vec<f64> = (1..=n).map(|j| (j as f64 * PI / (n + 1) as f64).sin()).collect();
        let ns = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, b) in v.iter().zip(&s) {
            assert!((a - b / ns).abs() < 1e-10);
        }
    }

    #[test]
    fn spd_solve_and_rejection() {
        let t = laplacian(10);
        let rhs = vec![1.0; 10];
        let x = t.solve_spd_shifted(0.0, &rhs).unwrap();
        let mut y = vec![0.0; 10];
        t.apply(&x, &mut y);
        for v in y {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(t.solve_spd_shifted(1.0, &rhs).is_none());
    }

    #[test]
    fn pivoted_solve_handles_indefinite_shift() {
        let t = laplacian(12);
        let rhs: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        let x = t.solve_shifted(1.3, &rhs);
        let mut y = vec![0.0; 12];
        t.apply(&x, &mut y);
        for i in 0..12 {
            assert!((y[i] - 1.3 * x[i] - rhs[i]).abs() < 1e-10);
        }
    }
}
