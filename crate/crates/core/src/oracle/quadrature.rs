//! Plain trapezoid quadrature, kept independent of every closed form it is
//! used to check.

use num_complex::Complex64;

use crate::evolution::GaussianDensityMatrix;
use crate::observation::ObservationOperator;

/// ∫∫ f(x, x') over [lo, hi]² with `n` nodes per axis.
pub fn trapezoid_2d(lo: f64, hi: f64, n: usize, f: impl Fn(f64, f64) -> Complex64) -> Complex64 {
    let h = (hi - lo) / (n as f64 - 1.0);
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let x = lo + i as f64 * h;
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += f(x, lo + j as f64 * h) * weight(j);
        }
        sum += row * weight(i);
    }
    sum * h * h
}

/// ∫ f(x) over [lo, hi] with `n` nodes.
pub fn trapezoid_1d(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let h = (hi - lo) / (n as f64 - 1.0);
    (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            f(lo + i as f64 * h) * w
        })
        .sum::<Complex64>()
        * h
}

/// tr(ρ²) = ∫∫ ρ(x, x') ρ(x', x) dx dx'.
pub fn purity(state: &GaussianDensityMatrix, lo: f64, hi: f64, n: usize) -> Complex64 {
    trapezoid_2d(lo, hi, n, |x, xp| state.kernel(x, xp) * state.kernel(xp, x))
}

/// tr(A ρ) = ∫∫ A(x, x') ρ(x', x) dx dx'.
pub fn trace_product(
    op: &ObservationOperator,
    state: &GaussianDensityMatrix,
    lo: f64,
    hi: f64,
    n: usize,
) -> Complex64 {
    trapezoid_2d(lo, hi, n, |x, xp| state.kernel(xp, x) * op.kernel(x, xp))
}
