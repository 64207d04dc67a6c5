//! Small numerical building blocks shared by the solvers.

pub(crate) mod descent;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

/// Richardson extrapolation of two estimates computed at mesh `h` and `h/2`
/// for a method whose leading error term is `O(h^order)`.
pub fn richardson(coarse: f64, fine: f64, order: i32) -> f64 {
    let k = 2f64.powi(order);
    (k * fine - coarse) / (k - 1.0)
}

/// `n` logarithmically spaced points covering `[lo, hi]` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
