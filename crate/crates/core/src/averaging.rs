//! Phase-averaged density matrix ρ̄.
//!
//! Averaging over many periods of the fast phase `-B x²` removes B and
//! leaves A and C alone. Anything that depends only on A and C (N, S,
//! purity, the weighted variance) is unchanged.

use serde::Serialize;

use crate::error::{require_finite, require_positive, Result};
use crate::evolution::{CubicSolution, GaussianDensityMatrix};
use crate::spectral::{mean_excitation, von_neumann_entropy};

pub fn phase_average(state: &GaussianDensityMatrix) -> GaussianDensityMatrix {
    state
        .with_b(0.0)
        .expect("dropping B keeps a valid state valid")
}

/// An evolution history addressed by wall-clock time: τ = `tau_per_second`·t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolvedFamily {
    pub cubic: CubicSolution,
    pub tau_per_second: f64,
}

impl EvolvedFamily {
    pub fn new(cubic: CubicSolution, tau_per_second: f64) -> Result<Self> {
        require_positive("tau per second", tau_per_second)?;
        Ok(Self {
            cubic,
            tau_per_second,
        })
    }

    pub fn tau(&self, t: f64) -> f64 {
        self.tau_per_second * t
    }

    pub fn averaged_state(&self, t: f64) -> Result<GaussianDensityMatrix> {
        Ok(phase_average(&self.cubic.evolve(self.tau(t))?))
    }
}

/// Exact A, C, N, S of the averaged state next to their late-time
/// leading-order forms `A ≈ λτ/2`, `C ≈ 1/(8a₂τ²)`, `N ≈ sqrt(λa₂τ³)` and
/// `S ≈ ln N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeScaling {
    pub t: f64,
    pub tau: f64,
    pub a: f64,
    pub c: f64,
    pub mean_excitation: f64,
    pub entropy: f64,
    pub a_leading: f64,
    pub c_leading: f64,
    pub mean_excitation_leading: f64,
    pub entropy_leading: f64,
}

impl TimeScaling {
    /// Largest relative deviation of A, C, N from their leading-order forms.
    pub fn leading_order_deviation(&self) -> f64 {
        let d = |exact: f64, approx: f64| ((approx - exact) / exact).abs();
        d(self.a, self.a_leading)
            .max(d(self.c, self.c_leading))
            .max(d(self.mean_excitation, self.mean_excitation_leading))
    }
}

pub fn averaged_time_scalings(family: &EvolvedFamily, t: f64) -> Result<TimeScaling> {
    require_finite("time", t)?;
    require_positive("time", t)?;
    let tau = family.tau(t);
    let state = family.averaged_state(t)?;
    let mean = mean_excitation(&state);
    let lambda = family.cubic.lambda();
    let a2 = family.cubic.a2();
    let n_leading = (lambda * a2 * tau).sqrt() * tau;
    Ok(TimeScaling {
        t,
        tau,
        a: state.a(),
        c: state.c(),
        mean_excitation: mean,
        entropy: von_neumann_entropy(mean),
        a_leading: 0.5 * lambda * tau,
        c_leading: 1.0 / (8.0 * a2 * tau * tau),
        mean_excitation_leading: n_leading,
        entropy_leading: if n_leading > 0.0 {
            n_leading.ln() + 1.0
        } else {
            0.0
        },
    })
}

/// d ln f / d ln t at `t` for a quantity of the averaged family, by a
/// symmetric difference of the exact closed form.
pub fn log_slope(family: &EvolvedFamily, t: f64, f: impl Fn(&TimeScaling) -> f64) -> Result<f64> {
    let h = 1e-3_f64;
    let up = averaged_time_scalings(family, t * h.exp())?;
    let down = averaged_time_scalings(family, t * (-h).exp())?;
    Ok((f(&up).ln() - f(&down).ln()) / (2.0 * h))
}

/// dS/d ln t at `t`.
pub fn entropy_growth_coefficient(family: &EvolvedFamily, t: f64) -> Result<f64> {
    let h = 1e-3_f64;
    let up = averaged_time_scalings(family, t * h.exp())?;
    let down = averaged_time_scalings(family, t * (-h).exp())?;
    Ok((up.entropy - down.entropy) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{cubic_from_initial, minimum_uncertainty_initial, purity};
    use crate::spectral::weighted_position_variance;
    use crate::units::LengthUnit;

    const U: LengthUnit = LengthUnit::PlanckLength;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn drops_only_b() {
        let s = GaussianDensityMatrix::new(0.75, -0.5, 0.0625, U).unwrap();
        let avg = phase_average(&s);
        assert_eq!((avg.a(), avg.b(), avg.c()), (0.75, 0.0, 0.0625));
        assert_eq!(avg.unit(), s.unit());
        assert_eq!(phase_average(&avg), avg);
        assert_eq!(mean_excitation(&avg), mean_excitation(&s));
        assert_eq!(purity(&avg), purity(&s));
        assert_eq!(
            weighted_position_variance(&avg),
            weighted_position_variance(&s)
        );
    }

    fn baseball_like() -> EvolvedFamily {
        let cubic =
            cubic_from_initial(&minimum_uncertainty_initial(0.25, U).unwrap(), 2.2339e-60).unwrap();
        // τ(t_b) = 1.7831e37 at t_b = 6.44675 s
        EvolvedFamily::new(cubic, 1.7831e37 / 6.44675).unwrap()
    }

    #[test]
    fn late_time_scalings() {
        let fam = baseball_like();
        let tb = 6.44675;
        let s1 = averaged_time_scalings(&fam, tb).unwrap();
        let s4 = averaged_time_scalings(&fam, 4.0 * tb).unwrap();
        let s2 = averaged_time_scalings(&fam, 2.0 * tb).unwrap();
        assert!(rel(s1.mean_excitation, 1.12538e26) < 5e-3);
        assert!(rel(s4.mean_excitation / s1.mean_excitation, 8.0) < 1e-2);
        assert!(rel(s2.c / s1.c, 0.25) < 1e-2);
        assert!(s1.leading_order_deviation() < 1e-6);
        let slope_n = log_slope(&fam, tb, |s| s.mean_excitation).unwrap();
        assert!((slope_n - 1.5).abs() < 1e-6);
        let growth = entropy_growth_coefficient(&fam, tb).unwrap();
        assert!((growth - 1.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_positive_time() {
        assert!(averaged_time_scalings(&baseball_like(), 0.0).is_err());
        assert!(averaged_time_scalings(&baseball_like(), -1.0).is_err());
    }
}
