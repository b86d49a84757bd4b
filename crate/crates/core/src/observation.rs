//! Localized Gaussian observation operators
//!
//! ```text
//! A_k(x, x') = N_k exp{-[α (x - x')² + γ (x + x' - 2x_k)²]}
//! ```
//!
//! and their measures tr(A_k ρ). N_k = 2 sqrt(γ/π) gives every operator unit
//! trace.
//!
//! The measure has a closed form. With y = x - x', z = x + x' (Jacobian 1/2),
//! ρ(x', x) flips the sign of the B term, and the y integral leaves an
//! effective z-curvature q = C + B²/(4(A+α)):
//!
//! ```text
//! tr(A_k ρ) = N_k sqrt(πC) / sqrt((A+α)(q+γ)) · exp(-4qγ x_k² / (q+γ))
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::evolution::GaussianDensityMatrix;
use crate::units::{convert_dimension, convert_length, LengthUnit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservationOperator {
    center: f64,
    alpha: f64,
    gamma: f64,
    norm: f64,
    unit: LengthUnit,
}

impl ObservationOperator {
    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn unit(&self) -> LengthUnit {
        self.unit
    }

    pub fn kernel(&self, x: f64, xp: f64) -> f64 {
        let y = x - xp;
        let w = x + xp - 2.0 * self.center;
        self.norm * (-(self.alpha * y * y + self.gamma * w * w)).exp()
    }

    pub fn to_unit(&self, unit: LengthUnit) -> Result<Self> {
        make_operator(
            convert_length(self.center, self.unit, unit)?,
            convert_dimension(self.alpha, -2, self.unit, unit)?,
            convert_dimension(self.gamma, -2, self.unit, unit)?,
            unit,
        )
    }
}

pub fn make_operator(
    center: f64,
    alpha: f64,
    gamma: f64,
    unit: LengthUnit,
) -> Result<ObservationOperator> {
    require_finite("operator center", center)?;
    require_finite("alpha", alpha)?;
    if alpha < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha must be non-negative, got {alpha}"
        )));
    }
    require_positive("gamma", gamma)?;
    Ok(ObservationOperator {
        center,
        alpha,
        gamma,
        norm: 2.0 * (gamma / PI).sqrt(),
        unit,
    })
}

pub fn measure(op: &ObservationOperator, state: &GaussianDensityMatrix) -> Result<f64> {
    if op.unit() != state.unit() {
        return Err(Error::UnitMismatch {
            left: op.unit().to_string(),
            right: state.unit().to_string(),
        });
    }
    let (a, b, c) = (state.a(), state.b(), state.c());
    let a_eff = a + op.alpha;
    let q = c + b * b / (4.0 * a_eff);
    let qg = q + op.gamma;
    let x = op.center;
    let value =
        op.norm * (PI * c).sqrt() / (a_eff * qg).sqrt() * (-4.0 * q * op.gamma * x * x / qg).exp();
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub center: f64,
    pub measure: f64,
}

/// Measures of a family of identical-width operators at `centers`.
pub fn measure_profile(
    centers: &[f64],
    alpha: f64,
    gamma: f64,
    state: &GaussianDensityMatrix,
) -> Result<Vec<ProfilePoint>> {
    if centers.is_empty() {
        return Err(Error::InvalidArgument(
            "observation profile needs at least one center".into(),
        ));
    }
    centers
        .iter()
        .map(|&center| {
            let op = make_operator(center, alpha, gamma, state.unit())?;
            Ok(ProfilePoint {
                center,
                measure: measure(&op, state)?,
            })
        })
        .collect()
}
