//! Direct integration of the master equation on the grid, in τ units:
//!
//! ```text
//! ∂ρ/∂τ = (i/2)(∂²/∂x² - ∂²/∂x'²) ρ - (3λ/2)(x - x')² ρ
//! ```
//!
//! Both second derivatives are spectral. In time, either classical RK4 or
//! RK4 in the interaction picture of the damping term (Lawson), which treats
//! the diagonal damping exactly and leaves only the kinetic term to set the
//! step size. Both are fourth order.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::grid::{GridState, SpectralOps};
use crate::error::{require_finite, Error, Result};

/// Norm growth beyond this factor is reported as an instability.
pub const GROWTH_LIMIT: f64 = 10.0;

// Conservative radius of the RK4 stability region around the numerical range
// of the operator.
const RK4_STABLE_RADIUS: f64 = 2.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    /// RK4 after factoring out exp(-(3λ/2) y² τ).
    IntegratingFactorRk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEquation {
    pub lambda: f64,
    /// Include free spreading; off leaves the pure damping equation.
    pub kinetic: bool,
    pub scheme: Scheme,
}

impl MasterEquation {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            kinetic: true,
            scheme: Scheme::IntegratingFactorRk4,
        }
    }

    /// The damping equation alone, stepped with plain RK4 so the result can
    /// be held against the exact exponential.
    pub fn damping_only(lambda: f64) -> Self {
        Self {
            lambda,
            kinetic: false,
            scheme: Scheme::Rk4,
        }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }
}

struct Rhs {
    spectral: SpectralOps,
    /// (i/2)(k_j² - k_i²) on the transformed grid
    kinetic: Option<Array2<Complex64>>,
    /// -(3λ/2)(x_i - x_j)²
    damping: Array2<f64>,
}

impl Rhs {
    fn new(grid: &GridState, eq: MasterEquation) -> Self {
        let n = grid.n_points();
        let spectral = SpectralOps::new(n, grid.spacing());
        let k = spectral.wavenumbers();
        let kinetic = eq.kinetic.then(|| {
            Array2::from_shape_fn((n, n), |(i, j)| {
                Complex64::new(0.0, 0.5 * (k[j] * k[j] - k[i] * k[i]))
            })
        });
        let rate = 1.5 * eq.lambda;
        let damping = Array2::from_shape_fn((n, n), |(i, j)| {
            let y = grid.x(i) - grid.x(j);
            -rate * y * y
        });
        Self {
            spectral,
            kinetic,
            damping,
        }
    }

    fn kinetic(&self, rho: &Array2<Complex64>, out: &mut Array2<Complex64>) {
        match &self.kinetic {
            Some(mult) => {
                out.assign(rho);
                self.spectral.forward(out);
                *out *= mult;
                self.spectral.inverse(out);
            }
            None => out.fill(Complex64::new(0.0, 0.0)),
        }
    }

    fn eval(&self, rho: &Array2<Complex64>, out: &mut Array2<Complex64>) {
        self.kinetic(rho, out);
        Zip::from(out)
            .and(rho)
            .and(&self.damping)
            .for_each(|o, &r, &d| *o += r * d);
    }
}

/// Largest stable RK4 step for this grid and equation.
pub fn max_stable_step(grid: &GridState, eq: MasterEquation) -> f64 {
    let k_nyquist = std::f64::consts::PI / grid.spacing();
    let kinetic = if eq.kinetic {
        0.5 * k_nyquist * k_nyquist
    } else {
        0.0
    };
    let width = grid.x_max() - grid.x_min();
    let damping = match eq.scheme {
        Scheme::Rk4 => 1.5 * eq.lambda * width * width,
        Scheme::IntegratingFactorRk4 => 0.0,
    };
    RK4_STABLE_RADIUS / (kinetic + damping).max(f64::MIN_POSITIVE)
}

/// Smallest step count that keeps RK4 inside its stability region.
pub fn stable_step_count(grid: &GridState, eq: MasterEquation, tau_end: f64) -> usize {
    (tau_end / max_stable_step(grid, eq)).ceil().max(1.0) as usize
}

pub fn integrate_master_equation(
    grid: &GridState,
    lambda: f64,
    tau_end: f64,
    n_steps: usize,
) -> Result<GridState> {
    integrate_with(grid, MasterEquation::new(lambda), tau_end, n_steps)
}

pub fn integrate_with(
    grid: &GridState,
    eq: MasterEquation,
    tau_end: f64,
    n_steps: usize,
) -> Result<GridState> {
    require_finite("lambda", eq.lambda)?;
    require_finite("tau_end", tau_end)?;
    if eq.lambda < 0.0 || tau_end < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda and tau_end must be non-negative, got {} and {tau_end}",
            eq.lambda
        )));
    }
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be positive".into()));
    }
    let rhs = Rhs::new(grid, eq);
    let dt = tau_end / n_steps as f64;
    let initial_peak = grid.max_abs();
    let dim = grid.values().dim();

    let mut out = grid.clone();
    let rho = out.values_mut();
    let mut k1 = Array2::zeros(dim);
    let mut k2 = Array2::zeros(dim);
    let mut k3 = Array2::zeros(dim);
    let mut k4 = Array2::zeros(dim);
    let mut stage = Array2::zeros(dim);

    // exp(-(3λ/2) y² dt/2)
    let e_half = rhs.damping.mapv(|d| (d * 0.5 * dt).exp());

    for step in 0..n_steps {
        match eq.scheme {
            Scheme::Rk4 => rk4_step(
                &rhs,
                rho,
                dt,
                [&mut k1, &mut k2, &mut k3, &mut k4],
                &mut stage,
            ),
            Scheme::IntegratingFactorRk4 => lawson_step(
                &rhs,
                &e_half,
                rho,
                dt,
                [&mut k1, &mut k2, &mut k3, &mut k4],
                &mut stage,
            ),
        }

        let peak = rho.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        if !peak.is_finite() || peak > GROWTH_LIMIT * initial_peak {
            return Err(Error::IntegrationFailure {
                step: step + 1,
                total: n_steps,
                reason: format!("norm grew from {initial_peak:.3e} to {peak:.3e}"),
            });
        }
    }
    Ok(out)
}

type Stages<'a> = [&'a mut Array2<Complex64>; 4];

fn rk4_step(
    rhs: &Rhs,
    rho: &mut Array2<Complex64>,
    dt: f64,
    k: Stages,
    stage: &mut Array2<Complex64>,
) {
    let [k1, k2, k3, k4] = k;
    {
        rhs.eval(rho, k1);
        Zip::from(&mut *stage)
            .and(&*rho)
            .and(&*k1)
            .for_each(|s, &r, &k| *s = r + k * (0.5 * dt));
        rhs.eval(stage, k2);
        Zip::from(&mut *stage)
            .and(&*rho)
            .and(&*k2)
            .for_each(|s, &r, &k| *s = r + k * (0.5 * dt));
        rhs.eval(stage, k3);
        Zip::from(&mut *stage)
            .and(&*rho)
            .and(&*k3)
            .for_each(|s, &r, &k| *s = r + k * dt);
        rhs.eval(stage, k4);
    }
    Zip::from(rho)
        .and(&*k1)
        .and(&*k2)
        .and(&*k3)
        .and(&*k4)
        .for_each(|r, &a, &b, &c, &d| *r += (a + (b + c) * 2.0 + d) * (dt / 6.0));
}

/// One Lawson step with E = exp(-(3λ/2) y² dt/2):
/// u' = E²u + dt/6 [E²k1 + 2E(k2 + k3) + k4].
fn lawson_step(
    rhs: &Rhs,
    e_half: &Array2<f64>,
    rho: &mut Array2<Complex64>,
    dt: f64,
    k: Stages,
    stage: &mut Array2<Complex64>,
) {
    let [k1, k2, k3, k4] = k;
    rhs.kinetic(rho, k1);
    Zip::from(&mut *stage)
        .and(&*rho)
        .and(&*k1)
        .and(e_half)
        .for_each(|s, &r, &k, &e| *s = (r + k * (0.5 * dt)) * e);
    rhs.kinetic(stage, k2);
    Zip::from(&mut *stage)
        .and(&*rho)
        .and(&*k2)
        .and(e_half)
        .for_each(|s, &r, &k, &e| *s = r * e + k * (0.5 * dt));
    rhs.kinetic(stage, k3);
    Zip::from(&mut *stage)
        .and(&*rho)
        .and(&*k3)
        .and(e_half)
        .for_each(|s, &r, &k, &e| *s = r * (e * e) + k * (e * dt));
    rhs.kinetic(stage, k4);
    Zip::from(rho)
        .and(&*k1)
        .and(&*k2)
        .and(&*k3)
        .and(&*k4)
        .and(e_half)
        .for_each(|r, &a, &b, &c, &d, &e| {
            let e2 = e * e;
            *r = (*r + a * (dt / 6.0)) * e2 + ((b + c) * (2.0 * e) + d) * (dt / 6.0);
        });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::GaussianDensityMatrix;
    use crate::oracle::grid::discretize;
    use crate::units::LengthUnit;

    const U: LengthUnit = LengthUnit::PlanckLength;

    #[test]
    fn damping_alone_is_exact_exponential() {
        let s = GaussianDensityMatrix::new(0.6, 0.2, 0.3, U).unwrap();
        let g = discretize(&s, -10.0, 10.0, 64).unwrap();
        let lambda = 0.7;
        let tau = 0.4;
        let eq = MasterEquation::damping_only(lambda);
        let steps = 4 * stable_step_count(&g, eq, tau);
        let out = integrate_with(&g, eq, tau, steps).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..64 {
            for j in 0..64 {
                let y = g.x(i) - g.x(j);
                let exact = g.values()[[i, j]] * (-1.5 * lambda * y * y * tau).exp();
                worst = worst.max((out.values()[[i, j]] - exact).norm());
            }
        }
        assert!(worst < 1e-8, "max error {worst}");
        // fixed y != 0: magnitude decays monotonically in τ
        let mid = 32;
        let mut last = g.values()[[mid + 3, mid]].norm();
        for k in 1..=4 {
            let t = 0.1 * k as f64;
            let o = integrate_with(&g, eq, t, 4 * stable_step_count(&g, eq, t)).unwrap();
            let now = o.values()[[mid + 3, mid]].norm();
            assert!(now < last);
            last = now;
        }
    }

    #[test]
    fn integrating_factor_is_exact_for_damping() {
        let s = GaussianDensityMatrix::new(0.6, 0.2, 0.3, U).unwrap();
        let g = discretize(&s, -10.0, 10.0, 64).unwrap();
        let eq = MasterEquation::damping_only(5.0).with_scheme(Scheme::IntegratingFactorRk4);
        let out = integrate_with(&g, eq, 0.4, 3).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let y = g.x(i) - g.x(j);
                let exact = g.values()[[i, j]] * (-7.5 * y * y * 0.4).exp();
                assert!((out.values()[[i, j]] - exact).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn schemes_agree() {
        let s = GaussianDensityMatrix::new(0.7, -0.3, 0.4, U).unwrap();
        let g = discretize(&s, -10.0, 10.0, 96).unwrap();
        let lawson = MasterEquation::new(1.2);
        let plain = lawson.with_scheme(Scheme::Rk4);
        let a = integrate_with(&g, lawson, 0.3, stable_step_count(&g, plain, 0.3)).unwrap();
        let b = integrate_with(&g, plain, 0.3, stable_step_count(&g, plain, 0.3)).unwrap();
        let diff = (a.values() - b.values())
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.norm()));
        assert!(diff < 1e-8, "{diff}");
    }

    #[test]
    fn oversized_step_is_detected() {
        let s = GaussianDensityMatrix::new(0.5, 0.0, 0.5, U).unwrap();
        let g = discretize(&s, -8.0, 8.0, 128).unwrap();
        let err = integrate_master_equation(&g, 1.0, 2.0, 2).unwrap_err();
        assert!(matches!(err, Error::IntegrationFailure { .. }), "{err:?}");
    }

    #[test]
    fn trace_and_hermiticity_preserved() {
        let s = GaussianDensityMatrix::new(0.7, -0.3, 0.4, U).unwrap();
        let g = discretize(&s, -10.0, 10.0, 96).unwrap();
        let eq = MasterEquation::new(1.2);
        let out = integrate_with(&g, eq, 0.3, stable_step_count(&g, eq, 0.3)).unwrap();
        assert!((out.trace().re - 1.0).abs() < 1e-5);
        assert!(out.trace().im.abs() < 1e-10);
        assert!(out.hermiticity_error() < 1e-10);
    }
}
