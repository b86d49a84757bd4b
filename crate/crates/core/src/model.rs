//! Particle and scattering environment, and the decoherence coefficients
//! Λ = nσvk²/(8π²) and λ = 2Λm/(3ħ) derived from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeParticle {
    mass: f64,
    radius: Option<f64>,
}

impl FreeParticle {
    pub fn new(mass: f64, radius: Option<f64>) -> Result<Self> {
        require_positive("particle mass", mass)?;
        if let Some(r) = radius {
            require_positive("particle radius", r)?;
        }
        Ok(Self { mass, radius })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Geometric cross section π r².
    pub fn cross_section(&self) -> Option<f64> {
        self.radius.map(|r| PI * r * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringEnvironment {
    pub number_density: f64,
    pub cross_section: f64,
    pub mean_relative_velocity: f64,
    pub rms_wavenumber: f64,
}

impl ScatteringEnvironment {
    pub fn new(
        number_density: f64,
        cross_section: f64,
        mean_relative_velocity: f64,
        rms_wavenumber: f64,
    ) -> Result<Self> {
        require_positive("number density", number_density)?;
        require_positive("cross section", cross_section)?;
        require_positive("mean relative velocity", mean_relative_velocity)?;
        require_positive("rms wavenumber", rms_wavenumber)?;
        Ok(Self {
            number_density,
            cross_section,
            mean_relative_velocity,
            rms_wavenumber,
        })
    }
}

/// Thermal gas of identical molecules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirModel {
    pub molecular_mass: f64,
    pub mass_density: f64,
    pub temperature: f64,
}

impl AirModel {
    pub fn new(molecular_mass: f64, mass_density: f64, temperature: f64) -> Result<Self> {
        require_positive("molecular mass", molecular_mass)?;
        require_positive("air mass density", mass_density)?;
        require_positive("air temperature", temperature)?;
        Ok(Self {
            molecular_mass,
            mass_density,
            temperature,
        })
    }

    /// Sea-level U.S. Standard Atmosphere.
    pub fn us_standard_sea_level() -> Self {
        Self {
            molecular_mass: 4.80965e-26,
            mass_density: 1.2250,
            temperature: 288.15,
        }
    }

    /// rms molecular speed sqrt(3 k T / m_a).
    pub fn rms_velocity(&self, constants: &PhysicalConstants) -> f64 {
        (3.0 * constants.boltzmann * self.temperature / self.molecular_mass).sqrt()
    }
}

pub fn big_lambda(env: &ScatteringEnvironment) -> f64 {
    env.number_density * env.cross_section * env.mean_relative_velocity * env.rms_wavenumber.powi(2)
        / (8.0 * PI * PI)
}

/// Scattering environment of a spherical particle in a thermal gas. The
/// relative velocity is the molecular rms speed, and the wavenumber is
/// m_a v_a / ħ.
pub fn air_environment(
    air: &AirModel,
    particle: &FreeParticle,
    constants: &PhysicalConstants,
) -> Result<ScatteringEnvironment> {
    let cross_section = particle.cross_section().ok_or_else(|| {
        Error::InvalidArgument("particle radius is required to derive a cross section".into())
    })?;
    let v = air.rms_velocity(constants);
    Ok(ScatteringEnvironment {
        number_density: air.mass_density / air.molecular_mass,
        cross_section,
        mean_relative_velocity: v,
        rms_wavenumber: air.molecular_mass * v / constants.hbar,
    })
}

/// λ = 2Λm/(3ħ), in 1/length⁴ of whatever length Λ was expressed in.
pub fn lambda_coefficient(
    big_lambda: f64,
    particle: &FreeParticle,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_finite("localization rate", big_lambda)?;
    if big_lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "localization rate must be non-negative, got {big_lambda}"
        )));
    }
    Ok(2.0 * big_lambda * particle.mass() / (3.0 * constants.hbar))
}

/// The one-line closed form m σ m_a ρ_a v_a³ / (3h³). Kept only as a
/// cross-check: it is smaller than the two-step chain by exactly 2π.
pub fn lambda_composite(
    air: &AirModel,
    particle: &FreeParticle,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let sigma = particle.cross_section().ok_or_else(|| {
        Error::InvalidArgument("particle radius is required to derive a cross section".into())
    })?;
    let v = air.rms_velocity(constants);
    Ok(
        particle.mass() * sigma * air.molecular_mass * air.mass_density * v.powi(3)
            / (3.0 * constants.h.powi(3)),
    )
}

/// τ = ħt/m, with dimension length².
pub fn tau_from_time(
    t: f64,
    particle: &FreeParticle,
    constants: &PhysicalConstants,
) -> Result<f64> {
    require_finite("time", t)?;
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    Ok(constants.hbar * t / particle.mass())
}

/// Flight time over level ground for launch speed `speed` at 45°.
pub fn flight_time(speed: f64, constants: &PhysicalConstants) -> f64 {
    std::f64::consts::SQRT_2 * speed / constants.g_gravity
}
