//! Closed-form evolution of a Gaussian density matrix.
//!
//! The kernel is
//!
//! ```text
//! ρ(x, x') = sqrt(4C/π) exp{-[A y² + i B y z + C z²]},   y = x - x',  z = x + x'
//! ```
//!
//! and the whole history under the master equation is encoded by the cubic
//! `X(τ) = λτ³ + a₂τ² + a₁τ + a₀`, with `A = (2XX'' - X'²)/(8X)`,
//! `B = -X'/(4X)` and `C = 1/(8X)`.
//!
//! `2XX'' - X'²` is never formed by subtraction. Expanding it gives
//!
//! ```text
//! 2XX'' - X'² = 3λ²τ⁴ + 4λa₂τ³ + 6λa₁τ² + 12λa₀τ + (4a₀a₂ - a₁²)
//! ```
//!
//! whose constant term is `A(0)/C(0)`. Evaluated this way the baseball
//! regime (A/C ~ 1e52 on top of X ~ 1e74 in Planck units) keeps full
//! precision, where the direct difference would cancel to zero.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_finite, Error, Result};
use crate::units::{convert_dimension, LengthUnit};

/// Relative slack allowed on A ≥ C and on the mixedness bound.
pub const POSITIVITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianDensityMatrix {
    a_coeff: f64,
    b_coeff: f64,
    c_coeff: f64,
    unit: LengthUnit,
}

impl GaussianDensityMatrix {
    pub fn new(a: f64, b: f64, c: f64, unit: LengthUnit) -> Result<Self> {
        require_finite("A", a)?;
        require_finite("B", b)?;
        require_finite("C", c)?;
        if c <= 0.0 {
            return Err(Error::InvalidState(format!("C must be positive, got {c}")));
        }
        if a < c * (1.0 - POSITIVITY_SLACK) {
            return Err(Error::InvalidState(format!(
                "density matrix not positive: A = {a} < C = {c}"
            )));
        }
        Ok(Self {
            a_coeff: a,
            b_coeff: b,
            c_coeff: c,
            unit,
        })
    }

    pub fn a(&self) -> f64 {
        self.a_coeff
    }

    pub fn b(&self) -> f64 {
        self.b_coeff
    }

    pub fn c(&self) -> f64 {
        self.c_coeff
    }

    pub fn unit(&self) -> LengthUnit {
        self.unit
    }

    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.a_coeff, b, self.c_coeff, self.unit)
    }

    /// Same state with coefficients re-expressed in another length unit.
    pub fn to_unit(&self, unit: LengthUnit) -> Result<Self> {
        let conv = |v| convert_dimension(v, -2, self.unit, unit);
        Self::new(
            conv(self.a_coeff)?,
            conv(self.b_coeff)?,
            conv(self.c_coeff)?,
            unit,
        )
    }

    /// Kernel value ρ(x, x').
    pub fn kernel(&self, x: f64, xp: f64) -> Complex64 {
        let y = x - xp;
        let z = x + xp;
        let norm = (4.0 * self.c_coeff / PI).sqrt();
        let re = -(self.a_coeff * y * y + self.c_coeff * z * z);
        let im = -self.b_coeff * y * z;
        Complex64::from_polar(norm * re.exp(), im)
    }

    /// Variance of the diagonal (position) distribution, 1/(8C).
    pub fn position_variance(&self) -> f64 {
        1.0 / (8.0 * self.c_coeff)
    }

    /// A/C, which is 1 exactly for a pure state.
    pub fn mixedness(&self) -> f64 {
        self.a_coeff / self.c_coeff
    }
}

/// tr(ρ²) = sqrt(C/A).
pub fn purity(state: &GaussianDensityMatrix) -> f64 {
    (state.c() / state.a()).sqrt()
}

/// Pure minimum-uncertainty state with position variance `dx0_squared`.
pub fn minimum_uncertainty_initial(
    dx0_squared: f64,
    unit: LengthUnit,
) -> Result<GaussianDensityMatrix> {
    if !(dx0_squared.is_finite() && dx0_squared > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "initial position variance must be positive, got {dx0_squared}"
        )));
    }
    let a = 1.0 / (8.0 * dx0_squared);
    GaussianDensityMatrix::new(a, 0.0, a, unit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicSolution {
    lambda: f64,
    a2: f64,
    a1: f64,
    a0: f64,
    /// 4a₀a₂ - a₁², which equals A(0)/C(0). Cached because forming it from
    /// the coefficients cancels badly when B(0)²/C(0) dominates.
    mixedness0: f64,
    unit: LengthUnit,
}

impl CubicSolution {
    /// Builds a cubic from raw coefficients, rejecting histories that do not
    /// start from a positive density matrix (4a₀a₂ - a₁² < 1).
    pub fn new(lambda: f64, a2: f64, a1: f64, a0: f64, unit: LengthUnit) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("a2", a2), ("a1", a1), ("a0", a0)] {
            require_finite(name, v)?;
        }
        if lambda < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "lambda must be non-negative, got {lambda}"
            )));
        }
        if a0 <= 0.0 || a2 <= 0.0 {
            return Err(Error::InvalidState(format!(
                "a0 and a2 must be positive, got a0 = {a0}, a2 = {a2}"
            )));
        }
        let four = 4.0 * a0 * a2;
        let mixedness0 = four - a1 * a1;
        if mixedness0 < 1.0 - POSITIVITY_SLACK * four {
            return Err(Error::InvalidState(format!(
                "4 a0 a2 - a1^2 = {mixedness0} < 1: initial state violates the uncertainty bound"
            )));
        }
        Ok(Self {
            lambda,
            a2,
            a1,
            a0,
            mixedness0: mixedness0.max(1.0),
            unit,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn unit(&self) -> LengthUnit {
        self.unit
    }

    /// The combination 4a₀a₂ - a₁². Equal to A(0)/C(0); 1 for a pure start.
    pub fn initial_mixedness(&self) -> f64 {
        self.mixedness0
    }

    pub fn x(&self, tau: f64) -> f64 {
        let lt = self.lambda * tau;
        self.a0 + tau * (self.a1 + tau * (self.a2 + lt))
    }

    pub fn x_prime(&self, tau: f64) -> f64 {
        let lt = self.lambda * tau;
        self.a1 + tau * (2.0 * self.a2 + 3.0 * lt)
    }

    pub fn x_double_prime(&self, tau: f64) -> f64 {
        2.0 * self.a2 + 6.0 * self.lambda * tau
    }

    /// 2XX'' - X'² = A/C along the evolution, in expanded form.
    pub fn mixedness(&self, tau: f64) -> f64 {
        let lt = self.lambda * tau;
        self.mixedness0
            + lt * (12.0 * self.a0 + tau * (6.0 * self.a1 + tau * (4.0 * self.a2 + 3.0 * lt)))
    }

    /// X(τ)·(Δp/ħ)², which never drops below 1/4.
    pub fn uncertainty_product(&self, tau: f64) -> f64 {
        self.x(tau) * momentum_variance(self, tau)
    }

    pub fn evolve(&self, tau: f64) -> Result<GaussianDensityMatrix> {
        evolve(self, tau)
    }

    pub fn to_unit(&self, unit: LengthUnit) -> Result<Self> {
        let from = self.unit;
        Ok(Self {
            lambda: convert_dimension(self.lambda, -4, from, unit)?,
            a2: convert_dimension(self.a2, -2, from, unit)?,
            a1: self.a1,
            a0: convert_dimension(self.a0, 2, from, unit)?,
            mixedness0: self.mixedness0,
            unit,
        })
    }
}

pub fn cubic_from_initial(state0: &GaussianDensityMatrix, lambda: f64) -> Result<CubicSolution> {
    require_finite("lambda", lambda)?;
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda must be non-negative, got {lambda}"
        )));
    }
    let (a, b, c) = (state0.a(), state0.b(), state0.c());
    if c <= 0.0 {
        return Err(Error::InvalidState(format!(
            "C(0) must be positive, got {c}"
        )));
    }
    Ok(CubicSolution {
        lambda,
        a0: 1.0 / (8.0 * c),
        a1: -b / (2.0 * c),
        a2: 2.0 * a + b * b / (2.0 * c),
        mixedness0: (a / c).max(1.0),
        unit: state0.unit(),
    })
}

pub fn evolve(cubic: &CubicSolution, tau: f64) -> Result<GaussianDensityMatrix> {
    require_finite("tau", tau)?;
    if tau < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tau must be non-negative, got {tau}"
        )));
    }
    let x = cubic.x(tau);
    if !(x > 0.0) {
        return Err(Error::InvalidState(format!(
            "X({tau}) = {x} is not positive"
        )));
    }
    let eight_x = 8.0 * x;
    let a = cubic.mixedness(tau) / eight_x;
    let b = -cubic.x_prime(tau) / (4.0 * x);
    let c = 1.0 / eight_x;
    GaussianDensityMatrix::new(a, b, c, cubic.unit())
}

/// (Δx)² = X(τ).
pub fn position_variance(cubic: &CubicSolution, tau: f64) -> f64 {
    cubic.x(tau)
}

/// (Δp/ħ)² = X''/2 = 3λτ + a₂.
pub fn momentum_variance(cubic: &CubicSolution, tau: f64) -> f64 {
    3.0 * cubic.lambda * tau + cubic.a2
}
