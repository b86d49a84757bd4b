//! Independent numerical validation of the closed forms at O(1)
//! dimensionless parameters: sampled kernels, direct integration of the
//! master equation, coefficient extraction, kernel eigendecomposition and
//! plain quadrature.

mod eigen;
mod fit;
mod grid;
mod integrate;
pub mod quadrature;

pub use eigen::{eigendecompose_kernel, overlap, KernelSpectrum, MAX_COUNT};
pub use fit::{extract_gaussian_coefficients, extract_with, FitOptions, GaussianFit};
pub use grid::{discretize, GridState, COVERAGE_SIGMAS, MIN_POINTS, TRACE_TOLERANCE};
pub use integrate::{
    integrate_master_equation, integrate_with, max_stable_step, stable_step_count, MasterEquation,
    Scheme, GROWTH_LIMIT,
};

use serde::Serialize;

use crate::error::Result;
use crate::evolution::{cubic_from_initial, momentum_variance, GaussianDensityMatrix};
use crate::spectral::{eigenstate_amplitude, eigenvalue, mean_excitation, EigenstateSpec};

/// Grid extent and resolution adequate for evolving `state0` with `lambda`
/// up to `tau_end`: ±9 sigma of the widest diagonal along the way, and a
/// Nyquist wavenumber 10 sigmas out in the widest row spectrum.
pub fn grid_for_evolution(
    state0: &GaussianDensityMatrix,
    lambda: f64,
    tau_end: f64,
) -> Result<(f64, usize)> {
    const SAMPLES: usize = 64;
    let cubic = cubic_from_initial(state0, lambda)?;
    // X is convex, so its maximum on [0, τ] sits at an end point
    let widest = cubic.x(0.0).max(cubic.x(tau_end)).sqrt();
    let half = (COVERAGE_SIGMAS + 1.0) * widest;
    // along a row the kernel goes as exp(-(A + C + iB) x²), whose spectrum
    // has variance 2((A + C)² + B²)/(A + C); a focusing state peaks inside
    // the interval, so sample it
    let mut k_var = 0.0_f64;
    for s in 0..=SAMPLES {
        let st = cubic.evolve(tau_end * s as f64 / SAMPLES as f64)?;
        let re = st.a() + st.c();
        k_var = k_var.max(2.0 * (re * re + st.b() * st.b()) / re);
    }
    let k_needed = 10.0 * k_var.sqrt();
    let spacing = std::f64::consts::PI / k_needed;
    let n = ((2.0 * half / spacing).ceil() as usize + 1).max(MIN_POINTS);
    Ok((half, fft_friendly(n)))
}

/// Smallest even n' >= n with no prime factor above 5.
pub fn fft_friendly(n: usize) -> usize {
    let smooth = |mut m: usize| {
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        m == 1
    };
    (n.max(2)..)
        .find(|&m| m % 2 == 0 && smooth(m))
        .expect("5-smooth numbers are unbounded")
}

/// Steps per stability-limited step. At the stability edge the highest
/// resolved modes turn by over 2 rad per step, which is stable but leaves
/// 1e-4 level error on focusing states.
pub const ACCURACY_STEP_FACTOR: usize = 4;

/// Relative disagreement between grid-integrated and closed-form evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionComparison {
    pub lambda: f64,
    pub tau: f64,
    pub n_points: usize,
    pub n_steps: usize,
    pub a_error: f64,
    pub b_error: f64,
    pub c_error: f64,
    pub momentum_variance_error: f64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub fit_residual: f64,
}

impl EvolutionComparison {
    pub fn coefficient_error(&self) -> f64 {
        self.a_error.max(self.b_error).max(self.c_error)
    }
}

/// Integrates `state0` on a grid and compares the result with the closed
/// form. B is compared relative to sqrt(AC) so a crossing through zero does
/// not blow up the ratio.
pub fn compare_evolution(
    state0: &GaussianDensityMatrix,
    lambda: f64,
    tau: f64,
) -> Result<EvolutionComparison> {
    let (half, n) = grid_for_evolution(state0, lambda, tau)?;
    let grid = discretize(state0, -half, half, n)?;
    let eq = MasterEquation::new(lambda);
    let steps = ACCURACY_STEP_FACTOR * stable_step_count(&grid, eq, tau);
    let evolved = integrate_with(&grid, eq, tau, steps)?;
    let fit = extract_gaussian_coefficients(&evolved)?;
    let cubic = cubic_from_initial(state0, lambda)?;
    let exact = cubic.evolve(tau)?;
    let rel = |got: f64, want: f64| ((got - want) / want).abs();
    let b_scale = exact.b().abs().max((exact.a() * exact.c()).sqrt());
    Ok(EvolutionComparison {
        lambda,
        tau,
        n_points: n,
        n_steps: steps,
        a_error: rel(fit.a, exact.a()),
        b_error: (fit.b - exact.b()).abs() / b_scale,
        c_error: rel(fit.c, exact.c()),
        momentum_variance_error: rel(evolved.momentum_variance(), momentum_variance(&cubic, tau)),
        trace_error: (evolved.trace() - 1.0).norm(),
        hermiticity_error: evolved.hermiticity_error(),
        fit_residual: fit.residual_rms,
    })
}

/// Grid eigenvalues and eigenvectors against the geometric ladder and the
/// analytic eigenfunctions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub mean_excitation: f64,
    pub eigenvalue_errors: Vec<f64>,
    pub overlaps: Vec<f64>,
}

impl SpectrumComparison {
    pub fn worst_eigenvalue_error(&self) -> f64 {
        self.eigenvalue_errors.iter().cloned().fold(0.0, f64::max)
    }

    pub fn worst_overlap(&self) -> f64 {
        self.overlaps.iter().cloned().fold(1.0, f64::min)
    }
}


pub fn compare_spectrum(
    state: &GaussianDensityMatrix,
    levels: usize,
    n_points: usize,
) -> Result<SpectrumComparison> {
    let n_mean = mean_excitation(state);
    // eigenfunctions reach sqrt(2n+1) oscillator lengths; the diagonal
    // reaches 8 sigma
    let alpha = 4.0 * (state.a() * state.c()).sqrt();
    let reach = ((2.0 * levels as f64 + 1.0) / alpha).sqrt() * 3.0;
    let half = (COVERAGE_SIGMAS * state.position_variance().sqrt()).max(reach) * 1.1;
    let grid = discretize(state, -half, half, n_points)?;
    let spectrum = eigendecompose_kernel(&grid, levels)?;
    let h = grid.spacing();
    let mut eigenvalue_errors = Vec::with_capacity(levels);
    let mut overlaps = Vec::with_capacity(levels);
    for (k, (&value, vector)) in spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .enumerate()
    {
        let p = eigenvalue(n_mean, k as u64);
        eigenvalue_errors.push(((value - p) / p).abs());
        let spec = EigenstateSpec::new(state, k as u64)?;
        let sampled: Vec<_> = (0..grid.n_points())
            .map(|i| eigenstate_amplitude(&spec, grid.x(i)).map(|v| v * h.sqrt()))
            .collect::<Result<_>>()?;
        overlaps.push(overlap(vector, &sampled));
    }
    Ok(SpectrumComparison {
        mean_excitation: n_mean,
        eigenvalue_errors,
        overlaps,
    })
}
