//! Spectral decomposition of the Gaussian density matrix.
//!
//! The eigenvalues form the geometric ladder `p_n = N^n / (N+1)^(n+1)` and
//! the eigenfunctions are oscillator states with width parameter
//! `α = 4 sqrt(AC)` carrying the extra phase `exp(-i B x²)`. All ladder
//! arithmetic runs in log space; at N ~ 1e26 the powers overflow otherwise.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::GaussianDensityMatrix;
use crate::units::LengthUnit;

pub const DEFAULT_TARGET_MASS: f64 = 1.0 - 1e-9;
pub const MAX_TRUNCATION_INDEX: u64 = 1_000_000;

/// Mean excitation N = (sqrt(A/C) - 1)/2.
pub fn mean_excitation(state: &GaussianDensityMatrix) -> f64 {
    let ratio = state.a() / state.c();
    // (r - 1)/(2(sqrt r + 1)) avoids cancellation near the pure state
    let excess = (state.a() - state.c()) / state.c();
    (excess / (2.0 * (ratio.sqrt() + 1.0))).max(0.0)
}

/// ln of the ratio p_{n+1}/p_n = N/(N+1).
fn log_ratio(mean: f64) -> f64 {
    -(1.0 / mean).ln_1p()
}

pub fn eigenvalue(mean: f64, n: u64) -> f64 {
    if mean <= 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-mean.ln_1p() + n as f64 * log_ratio(mean)).exp()
}

/// S = (N+1) ln(N+1) - N ln N, in nats.
pub fn von_neumann_entropy(mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    mean.ln_1p() + mean * (1.0 / mean).ln_1p()
}

/// Σ p_n² = 1/(2N+1).
pub fn purity_from_mean(mean: f64) -> f64 {
    1.0 / (2.0 * mean + 1.0)
}

/// 1 - (N/(N+1))^(n_max+1), the probability held by levels 0..=n_max.
pub fn captured_mass(mean: f64, n_max: u64) -> f64 {
    if mean <= 0.0 {
        return 1.0;
    }
    -((n_max as f64 + 1.0) * log_ratio(mean)).exp_m1()
}

/// Smallest n_max whose levels 0..=n_max carry at least `target_mass`.
pub fn truncation_index(mean: f64, target_mass: f64) -> Result<u64> {
    if !(target_mass > 0.0 && target_mass < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target mass must lie in (0, 1), got {target_mass}"
        )));
    }
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean excitation must be finite and >= 0, got {mean}"
        )));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    let levels = ((-target_mass).ln_1p() / log_ratio(mean)).ceil();
    // beyond 2^53 neighbouring indices are indistinguishable in f64
    if levels > 9.0e15 {
        return Ok(if levels >= u64::MAX as f64 {
            u64::MAX
        } else {
            levels as u64 - 1
        });
    }
    let mut n = (levels as u64).saturating_sub(1);
    // settle floating-point edge cases at the boundary
    while n > 0 && captured_mass(mean, n - 1) >= target_mass {
        n -= 1;
    }
    while captured_mass(mean, n) < target_mass {
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub mean_excitation: f64,
    pub entropy_nats: f64,
    pub p0: f64,
    pub truncation_index: u64,
    pub captured_mass: f64,
}

impl SpectralSummary {
    pub fn of(state: &GaussianDensityMatrix) -> Self {
        Self::with_target(state, DEFAULT_TARGET_MASS).expect("default target mass is valid")
    }

    /// Summary truncated at `target_mass`, capped at [`MAX_TRUNCATION_INDEX`].
    pub fn with_target(state: &GaussianDensityMatrix, target_mass: f64) -> Result<Self> {
        let mean = mean_excitation(state);
        let n_max = truncation_index(mean, target_mass)?.min(MAX_TRUNCATION_INDEX);
        Ok(Self {
            mean_excitation: mean,
            entropy_nats: von_neumann_entropy(mean),
            p0: eigenvalue(mean, 0),
            truncation_index: n_max,
            captured_mass: captured_mass(mean, n_max),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenstateSpec {
    pub index: u64,
    /// 2 sqrt(AC), the coefficient of x² in the Gaussian envelope.
    pub width_parameter: f64,
    pub phase_coefficient: f64,
    pub unit: LengthUnit,
}

impl EigenstateSpec {
    pub fn new(state: &GaussianDensityMatrix, index: u64) -> Result<Self> {
        let width_parameter = 2.0 * (state.a() * state.c()).sqrt();
        if !(width_parameter > 0.0 && width_parameter.is_finite()) {
            return Err(Error::InvalidState(format!(
                "eigenstate width {width_parameter} is not positive"
            )));
        }
        if index > MAX_TRUNCATION_INDEX {
            return Err(Error::Truncation {
                index,
                limit: MAX_TRUNCATION_INDEX,
            });
        }
        Ok(Self {
            index,
            width_parameter,
            phase_coefficient: state.b(),
            unit: state.unit(),
        })
    }

    /// Oscillator parameter α = mω/ħ = 2 · width_parameter.
    pub fn alpha(&self) -> f64 {
        2.0 * self.width_parameter
    }
}

// Rescale the recurrence pair whenever it leaves this range.
const RESCALE_ABOVE: f64 = 1e150;

/// Normalized eigenfunction φ_n(x).
///
/// Uses the three-term recurrence for normalized Hermite functions,
/// `ψ_{k+1} = sqrt(2/(k+1)) ξ ψ_k - sqrt(k/(k+1)) ψ_{k-1}`, carrying the
/// Gaussian envelope as a separate log scale so large ξ neither underflows
/// the seed nor overflows the recurrence.
pub fn eigenstate_amplitude(spec: &EigenstateSpec, x: f64) -> Result<Complex64> {
    let alpha = spec.alpha();
    let xi = alpha.sqrt() * x;
    let mut log_scale = 0.25 * (alpha / std::f64::consts::PI).ln() - 0.5 * xi * xi;
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    for k in 0..spec.index {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev /= RESCALE_ABOVE;
            cur /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
    }
    let magnitude = cur * log_scale.exp();
    if !magnitude.is_finite() {
        return Err(Error::Truncation {
            index: spec.index,
            limit: MAX_TRUNCATION_INDEX,
        });
    }
    let phase = -spec.phase_coefficient * x * x;
    Ok(Complex64::from_polar(1.0, phase) * magnitude)
}

/// ⟨x²⟩ in eigenstate n: (2n+1)/(8 sqrt(AC)).
pub fn eigenstate_position_variance(state: &GaussianDensityMatrix, n: u64) -> f64 {
    (2.0 * n as f64 + 1.0) / (8.0 * (state.a() * state.c()).sqrt())
}

/// Σ p_n ⟨x²⟩_n = (2N+1)/(8 sqrt(AC)) = 1/(8C).
pub fn weighted_position_variance(state: &GaussianDensityMatrix) -> f64 {
    1.0 / (8.0 * state.c())
}
