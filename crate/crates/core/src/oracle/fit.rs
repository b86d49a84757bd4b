//! Least-squares recovery of (A, B, C) from a sampled kernel.
//!
//! The modulus gives `-ln|ρ| = A y² + C z² + D` directly. The phase
//! `-B (x² - x'²)` is fitted from phase differences between neighbouring
//! nodes, which avoids unwrapping across the window.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::grid::GridState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Nodes with |ρ| below this fraction of the peak are left out.
    pub window: f64,
    /// Residual rms (in log units) above which the fit is rejected.
    pub max_residual: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            window: 1e-6,
            max_residual: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub residual_rms: f64,
}

pub fn extract_gaussian_coefficients(grid: &GridState) -> Result<GaussianFit> {
    extract_with(grid, FitOptions::default())
}

pub fn extract_with(grid: &GridState, opts: FitOptions) -> Result<GaussianFit> {
    let values = grid.values();
    let n = grid.n_points();
    let h = grid.spacing();
    let peak = grid.max_abs();
    if !(peak > 0.0) {
        return Err(Error::InvalidArgument("grid is identically zero".into()));
    }
    let floor = opts.window * peak;
    let inside = |i: usize, j: usize| values[[i, j]].norm() > floor;

    // modulus
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if inside(i, j) {
                let y = grid.x(i) - grid.x(j);
                let z = grid.x(i) + grid.x(j);
                rows.extend_from_slice(&[y * y, z * z, 1.0]);
                rhs.push(-values[[i, j]].norm().ln());
            }
        }
    }
    let m = rhs.len();
    if m < 8 {
        return Err(Error::InvalidArgument(format!(
            "only {m} nodes above the fit window"
        )));
    }
    let design = DMatrix::from_row_slice(m, 3, &rows);
    let target = DVector::from_vec(rhs);
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .map_err(|e| Error::Decomposition(e.to_string()))?;
    let residual = &design * &coeffs - &target;
    let mut sq = residual.norm_squared();
    let mut count = m;

    // phase: arg(ρ_{i+1,j} / ρ_{i,j}) = -B h (2x_i + h), and along j the
    // same with the opposite sign
    let (mut num, mut den) = (0.0, 0.0);
    let mut diffs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !inside(i, j) {
                continue;
            }
            if i + 1 < n && inside(i + 1, j) {
                let dphi = (values[[i + 1, j]] * values[[i, j]].conj()).arg();
                let slope = -h * (2.0 * grid.x(i) + h);
                num += dphi * slope;
                den += slope * slope;
                diffs.push((dphi, slope));
            }
            if j + 1 < n && inside(i, j + 1) {
                let dphi = (values[[i, j + 1]] * values[[i, j]].conj()).arg();
                let slope = h * (2.0 * grid.x(j) + h);
                num += dphi * slope;
                den += slope * slope;
                diffs.push((dphi, slope));
            }
        }
    }
    let b = if den > 0.0 { num / den } else { 0.0 };
    for (dphi, slope) in &diffs {
        let r = dphi - b * slope;
        sq += r * r;
    }
    count += diffs.len();

    let residual_rms = (sq / count as f64).sqrt();
    if !(residual_rms <= opts.max_residual) {
        return Err(Error::FitQuality {
            residual: residual_rms,
            threshold: opts.max_residual,
        });
    }
    Ok(GaussianFit {
        a: coeffs[0],
        b,
        c: coeffs[1],
        d: coeffs[2],
        residual_rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::GaussianDensityMatrix;
    use crate::oracle::grid::discretize;
    use crate::units::LengthUnit;
    use num_complex::Complex64;

    const U: LengthUnit = LengthUnit::PlanckLength;

    #[test]
    fn exact_kernel_round_trip() {
        let s = GaussianDensityMatrix::new(0.75, -0.5, 0.0625, U).unwrap();
        let g = discretize(&s, -20.0, 20.0, 400).unwrap();
        let fit = extract_gaussian_coefficients(&g).unwrap();
        assert!(fit.residual_rms < 1e-10, "residual {}", fit.residual_rms);
        assert!(((fit.a - s.a()) / s.a()).abs() < 1e-10);
        assert!(((fit.b - s.b()) / s.b()).abs() < 1e-10);
        assert!(((fit.c - s.c()) / s.c()).abs() < 1e-10);
        let d = -(2.0 * (s.c() / std::f64::consts::PI).sqrt()).ln();
        assert!((fit.d - d).abs() < 1e-10);
    }

    #[test]
    fn two_displaced_gaussians_rejected() {
        let s = GaussianDensityMatrix::new(0.5, 0.0, 0.5, U).unwrap();
        let g = GridState::sample(-10.0, 10.0, 128, U, |x, xp| {
            let a = s.kernel(x - 2.0, xp - 2.0);
            let b = s.kernel(x + 2.0, xp + 2.0);
            (a + b) * 0.5 + Complex64::new(0.0, 0.0)
        })
        .unwrap();
        match extract_gaussian_coefficients(&g) {
            Err(Error::FitQuality { residual, .. }) => assert!(residual > 1e-2),
            other => panic!("expected fit-quality error, got {other:?}"),
        }
    }
}
