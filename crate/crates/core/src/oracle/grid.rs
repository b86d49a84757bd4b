use std::io::{self, Write};
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::evolution::GaussianDensityMatrix;
use crate::units::LengthUnit;

pub const MIN_POINTS: usize = 64;
/// Half-width of the grid in diagonal standard deviations.
pub const COVERAGE_SIGMAS: f64 = 8.0;
pub const TRACE_TOLERANCE: f64 = 1e-8;

/// ρ(x, x') sampled on a square grid; rows are x, columns x'.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    x_min: f64,
    x_max: f64,
    values: Array2<Complex64>,
    unit: LengthUnit,
}

impl GridState {
    pub fn from_values(
        x_min: f64,
        x_max: f64,
        values: Array2<Complex64>,
        unit: LengthUnit,
    ) -> Result<Self> {
        let (rows, cols) = values.dim();
        if rows != cols || rows < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid must be square, got {rows}x{cols}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidArgument(format!(
                "bad grid extent [{x_min}, {x_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            values,
            unit,
        })
    }

    /// Samples `f(x, x')` at the grid nodes.
    pub fn sample(
        x_min: f64,
        x_max: f64,
        n_points: usize,
        unit: LengthUnit,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let h = (x_max - x_min) / (n_points as f64 - 1.0);
        let values = Array2::from_shape_fn((n_points, n_points), |(i, j)| {
            f(x_min + i as f64 * h, x_min + j as f64 * h)
        });
        Self::from_values(x_min, x_max, values, unit)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.values.nrows()
    }

    pub fn unit(&self) -> LengthUnit {
        self.unit
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points() as f64 - 1.0)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    /// Σ ρ(x_i, x_i) Δx.
    pub fn trace(&self) -> Complex64 {
        self.values.diag().sum() * self.spacing()
    }

    /// Largest |ρ_ij - conj(ρ_ji)|.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.n_points();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.values[[i, j]] - self.values[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Σ x² ρ(x, x) Δx / trace.
    pub fn position_variance(&self) -> f64 {
        let h = self.spacing();
        let (mut m0, mut m2) = (0.0, 0.0);
        for i in 0..self.n_points() {
            let p = self.values[[i, i]].re;
            let x = self.x(i);
            m0 += p * h;
            m2 += x * x * p * h;
        }
        m2 / m0
    }

    /// (Δp/ħ)² from the mixed derivative: Σ [∂x ∂x' ρ]_ii Δx, by spectral
    /// differentiation.
    pub fn momentum_variance(&self) -> f64 {
        let spectral = SpectralOps::new(self.n_points(), self.spacing());
        let mut work = self.values.clone();
        spectral.forward(&mut work);
        let k = spectral.first_derivative_wavenumbers();
        let n = self.n_points();
        for i in 0..n {
            for j in 0..n {
                work[[i, j]] *= -k[i] * k[j];
            }
        }
        spectral.inverse(&mut work);
        work.diag().iter().map(|v| v.re).sum::<f64>() * self.spacing()
    }

    /// Row-major dump: a `#` header with the extent, then one line per row
    /// of interleaved `re,im` pairs.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# x_min={:.9e},x_max={:.9e},n_points={},unit={}",
            self.x_min,
            self.x_max,
            self.n_points(),
            self.unit
        )?;
        for row in self.values.rows() {
            let line: Vec<String> = row
                .iter()
                .map(|v| format!("{:.9e},{:.9e}", v.re, v.im))
                .collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Samples a Gaussian state, insisting the grid spans ±8 diagonal standard
/// deviations and that the quadrature trace is 1 to 1e-8.
pub fn discretize(
    state: &GaussianDensityMatrix,
    x_min: f64,
    x_max: f64,
    n_points: usize,
) -> Result<GridState> {
    if n_points < MIN_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {MIN_POINTS} points, got {n_points}"
        )));
    }
    let grid = GridState::sample(x_min, x_max, n_points, state.unit(), |x, xp| {
        state.kernel(x, xp)
    })?;
    let deficit = 1.0 - grid.trace().re;
    let sigma = state.position_variance().sqrt();
    let reach = COVERAGE_SIGMAS * sigma;
    if x_min > -reach || x_max < reach {
        return Err(Error::DomainCoverage {
            reason: format!(
                "[{x_min}, {x_max}] does not span ±{COVERAGE_SIGMAS} sigma = ±{reach:.6e}"
            ),
            deficit,
        });
    }
    if deficit.abs() > TRACE_TOLERANCE {
        return Err(Error::DomainCoverage {
            reason: format!(
                "grid spacing {:.3e} too coarse for sigma {sigma:.3e}",
                grid.spacing()
            ),
            deficit,
        });
    }
    Ok(grid)
}

/// 2-D FFT helpers on square row-major matrices.
pub(crate) struct SpectralOps {
    n: usize,
    spacing: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralOps {
    pub fn new(n: usize, spacing: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            spacing,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Angular wavenumbers in FFT order; the Nyquist entry is negative.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        let dk = 2.0 * std::f64::consts::PI / (self.n as f64 * self.spacing);
        (0..n)
            .map(|j| if j < (n + 1) / 2 { j } else { j - n } as f64 * dk)
            .collect()
    }

    /// Wavenumbers for odd derivatives, with the Nyquist mode zeroed.
    pub fn first_derivative_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.wavenumbers();
        if self.n % 2 == 0 {
            k[self.n / 2] = 0.0;
        }
        k
    }

    fn along_rows(&self, m: &mut Array2<Complex64>, fft: &Arc<dyn Fft<f64>>) {
        let buf = m.as_slice_mut().expect("grid matrices are contiguous");
        fft.process(buf);
    }

    fn transform(&self, m: &mut Array2<Complex64>, fft: &Arc<dyn Fft<f64>>) {
        self.along_rows(m, fft);
        let mut t = m.t().as_standard_layout().into_owned();
        self.along_rows(&mut t, fft);
        m.assign(&t.t());
    }

    pub fn forward(&self, m: &mut Array2<Complex64>) {
        self.transform(m, &self.forward);
    }

    /// Normalized inverse.
    pub fn inverse(&self, m: &mut Array2<Complex64>) {
        self.transform(m, &self.inverse);
        let scale = 1.0 / (self.n * self.n) as f64;
        m.mapv_inplace(|v| v * scale);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: LengthUnit = LengthUnit::PlanckLength;

    #[test]
    fn pure_state_trace() {
        let s = GaussianDensityMatrix::new(0.5, 0.0, 0.5, U).unwrap();
        let g = discretize(&s, -8.0, 8.0, 256).unwrap();
        assert!((g.trace().re - 1.0).abs() < 1e-8);
        assert!(g.trace().im.abs() < 1e-15);
    }

    #[test]
    fn sampled_kernel_is_hermitian() {
        let s = GaussianDensityMatrix::new(0.75, -0.5, 0.0625, U).unwrap();
        let g = discretize(&s, -20.0, 20.0, 256).unwrap();
        assert!(g.hermiticity_error() < 1e-15);
        assert!((g.position_variance() - s.position_variance()).abs() < 1e-6);
    }

    #[test]
    fn coverage_errors() {
        let s = GaussianDensityMatrix::new(0.75, -0.5, 0.0625, U).unwrap();
        match discretize(&s, -2.0, 2.0, 128) {
            Err(Error::DomainCoverage { deficit, .. }) => assert!(deficit > 0.01),
            other => panic!("expected coverage error, got {other:?}"),
        }
        assert!(matches!(
            discretize(&s, -20.0, 20.0, 32),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fft_round_trip() {
        let s = GaussianDensityMatrix::new(0.9, 0.3, 0.4, U).unwrap();
        let g = discretize(&s, -10.0, 10.0, 64).unwrap();
        let ops = SpectralOps::new(64, g.spacing());
        let mut m = g.values().clone();
        ops.forward(&mut m);
        ops.inverse(&mut m);
        let err = (&m - g.values())
            .iter()
            .fold(0.0_f64, |a, v| a.max(v.norm()));
        assert!(err < 1e-14);
    }

    #[test]
    fn momentum_variance_matches_closed_form() {
        // (Δp/ħ)² = a₂ = 2A + B²/(2C)
        let s = GaussianDensityMatrix::new(0.9, 0.3, 0.4, U).unwrap();
        let g = discretize(&s, -12.0, 12.0, 128).unwrap();
        let expected = 2.0 * s.a() + s.b() * s.b() / (2.0 * s.c());
        assert!((g.momentum_variance() - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn csv_dump_header() {
        let s = GaussianDensityMatrix::new(0.5, 0.0, 0.5, U).unwrap();
        let g = discretize(&s, -8.0, 8.0, 64).unwrap();
        let mut out = Vec::new();
        g.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("# x_min=-8.000000000e0,x_max=8.000000000e0,n_points=64"));
        assert_eq!(lines.next().unwrap().split(',').count(), 128);
        assert_eq!(text.lines().count(), 65);
    }
}
