//! Physical constants and length units.
//!
//! Everything downstream works in one declared [`LengthUnit`] per call chain.
//! Scenario ingestion converts SI inputs to Planck-scaled numbers once, and
//! reports convert back on emission.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};

/// Seconds in a Julian year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;

/// Kilograms per avoirdupois ounce.
pub const KG_PER_OUNCE: f64 = 0.028_349_523_125;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub h: f64,
    pub c: f64,
    pub gravitational: f64,
    pub boltzmann: f64,
    pub g_gravity: f64,
    pub planck_length: f64,
    pub planck_momentum: f64,
    pub planck_mass: f64,
}

impl PhysicalConstants {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const C: f64 = 299_792_458.0;
    pub const G: f64 = 6.674_30e-11;
    pub const BOLTZMANN: f64 = 1.380_649e-23;
    pub const STANDARD_GRAVITY: f64 = 9.806_65;
    pub const PLANCK_LENGTH: f64 = 1.616_255e-35;
    pub const PLANCK_MOMENTUM: f64 = 6.524_785;
    pub const PLANCK_MASS: f64 = 2.176_434e-8;

    pub fn codata() -> Self {
        Self {
            hbar: Self::HBAR,
            h: 2.0 * PI * Self::HBAR,
            c: Self::C,
            gravitational: Self::G,
            boltzmann: Self::BOLTZMANN,
            g_gravity: Self::STANDARD_GRAVITY,
            planck_length: Self::PLANCK_LENGTH,
            planck_momentum: Self::PLANCK_MOMENTUM,
            planck_mass: Self::PLANCK_MASS,
        }
    }

    /// sqrt(ħG/c³), recomputed from the defining constants.
    pub fn derived_planck_length(&self) -> f64 {
        (self.hbar * self.gravitational / self.c.powi(3)).sqrt()
    }

    /// sqrt(ħc³/G), recomputed from the defining constants.
    pub fn derived_planck_momentum(&self) -> f64 {
        (self.hbar * self.c.powi(3) / self.gravitational).sqrt()
    }

    pub fn planck_time(&self) -> f64 {
        self.planck_length / self.c
    }

    /// Mass unit ħ/(c·l_Pl) of the natural system built on the stored Planck
    /// length. Differs from the stored Planck mass at the 1e-7 level.
    pub fn natural_mass_unit(&self) -> f64 {
        self.hbar / (self.c * self.planck_length)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Positive, finite length scale in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Scale(f64);

impl Scale {
    pub fn new(meters: f64) -> Result<Self> {
        require_positive("custom length scale", meters).map(Scale)
    }

    pub fn meters(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Scale {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Scale::new(value)
    }
}

impl From<Scale> for f64 {
    fn from(s: Scale) -> f64 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnit {
    Meter,
    #[default]
    PlanckLength,
    Custom(Scale),
}

impl LengthUnit {
    pub fn custom(meters: f64) -> Result<Self> {
        Scale::new(meters).map(LengthUnit::Custom)
    }

    /// Size of one unit in meters.
    pub fn scale(self) -> f64 {
        match self {
            LengthUnit::Meter => 1.0,
            LengthUnit::PlanckLength => PhysicalConstants::PLANCK_LENGTH,
            LengthUnit::Custom(s) => s.meters(),
        }
    }
}

impl fmt::Display for LengthUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthUnit::Meter => write!(f, "m"),
            LengthUnit::PlanckLength => write!(f, "l_Pl"),
            LengthUnit::Custom(s) => write!(f, "{} m", s.meters()),
        }
    }
}

pub fn convert_length(value: f64, from: LengthUnit, to: LengthUnit) -> Result<f64> {
    require_finite("length", value)?;
    Ok(value * (from.scale() / to.scale()))
}

/// Converts a quantity carrying `power` net length dimensions from `from` to
/// `to`. A coefficient in 1/length² has power -2.
pub fn convert_dimension(value: f64, power: i32, from: LengthUnit, to: LengthUnit) -> Result<f64> {
    require_finite("quantity", value)?;
    Ok(value * (from.scale() / to.scale()).powi(power))
}

/// `quantity` (in meters^power) expressed in Planck lengths^power.
pub fn planck_scaled(quantity: f64, power: i32) -> Result<f64> {
    convert_dimension(quantity, power, LengthUnit::Meter, LengthUnit::PlanckLength)
}
