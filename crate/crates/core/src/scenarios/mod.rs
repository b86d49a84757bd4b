//! Named scenarios, the end-to-end pipeline, and the report.

mod config;
mod reference;
mod report;

pub use config::{load_scenario, to_config_text, ConfigError};
pub use reference::{lookup, PublishedValue, Tolerance, ToleranceProfile, BASEBALL};
pub use report::{emit, Discrepancy, Format, Report, ScalarRow, TrajectoryRow};

use serde::Serialize;

use crate::averaging::{
    averaged_time_scalings, entropy_growth_coefficient, log_slope, EvolvedFamily,
};
use crate::error::{Error, Result};
use crate::evolution::{
    cubic_from_initial, minimum_uncertainty_initial, momentum_variance, purity,
};
use crate::model::{
    air_environment, big_lambda, flight_time, lambda_coefficient, lambda_composite, tau_from_time,
    AirModel, FreeParticle, ScatteringEnvironment,
};
use crate::observation::measure_profile;
use crate::spectral::{
    eigenstate_position_variance, mean_excitation, von_neumann_entropy, weighted_position_variance,
    SpectralSummary,
};
use crate::units::{planck_scaled, LengthUnit, PhysicalConstants, KG_PER_OUNCE, SECONDS_PER_YEAR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scattering {
    Air(AirModel),
    Environment(ScatteringEnvironment),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionTime {
    Seconds(f64),
    /// Level-ground flight time at 45° for the scenario speed.
    FlightTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    Baseball,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSpec {
    pub centers_m: Vec<f64>,
    pub alpha_per_m2: f64,
    pub gamma_per_m2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub particle: FreeParticle,
    pub scattering: Scattering,
    /// Initial rms position spread of the pure minimum-uncertainty state.
    pub initial_dx_planck_lengths: f64,
    pub evolution: EvolutionTime,
    pub speed: Option<f64>,
    /// Empty means evenly spaced samples chosen at run time.
    pub sample_times: Vec<f64>,
    pub observation: Option<ObservationSpec>,
    pub compare_with: Option<Reference>,
    /// `false` forces λ = 0.
    pub decoherence: bool,
}

impl Scenario {
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        let invalid = |section: &str, key: &str, message: String| ConfigError::Invalid {
            section: section.into(),
            key: key.into(),
            message,
        };
        let dx = self.initial_dx_planck_lengths;
        if !(dx.is_finite() && dx > 0.0) {
            return Err(invalid(
                "scenario",
                "initial_dx_planck_lengths",
                format!("must be positive, got {dx}"),
            ));
        }
        if let Some(v) = self.speed {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    "scenario",
                    "speed_m_per_s",
                    format!("must be positive, got {v}"),
                ));
            }
        }
        match self.evolution {
            EvolutionTime::Seconds(t) if !(t.is_finite() && t > 0.0) => {
                return Err(invalid(
                    "scenario",
                    "evolution_time_s",
                    format!("must be positive, got {t}"),
                ));
            }
            EvolutionTime::FlightTime if self.speed.is_none() => {
                return Err(ConfigError::MissingKey {
                    section: "scenario".into(),
                    key: "speed_m_per_s".into(),
                });
            }
            _ => {}
        }
        if let Some(t) = self
            .sample_times
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0))
        {
            return Err(invalid(
                "scenario",
                "sample_times_s",
                format!("times must be non-negative, got {t}"),
            ));
        }
        if let Scattering::Air(_) = self.scattering {
            if self.particle.radius().is_none() {
                return Err(ConfigError::MissingKey {
                    section: "particle".into(),
                    key: "radius_m".into(),
                });
            }
        }
        if let Some(obs) = &self.observation {
            if obs.centers_m.is_empty() {
                return Err(invalid(
                    "observation",
                    "centers_m",
                    "needs at least one center".into(),
                ));
            }
            if !(obs.alpha_per_m2.is_finite() && obs.alpha_per_m2 >= 0.0) {
                return Err(invalid(
                    "observation",
                    "alpha_per_m2",
                    "must be non-negative".into(),
                ));
            }
            if !(obs.gamma_per_m2.is_finite() && obs.gamma_per_m2 > 0.0) {
                return Err(invalid(
                    "observation",
                    "gamma_per_m2",
                    "must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn evolution_time(&self, constants: &PhysicalConstants) -> f64 {
        match self.evolution {
            EvolutionTime::Seconds(t) => t,
            EvolutionTime::FlightTime => flight_time(self.speed.unwrap_or(0.0), constants),
        }
    }
}

pub const BASEBALL_MASS_KG: f64 = 0.145_955_3;
pub const BASEBALL_RADIUS_M: f64 = 0.0369;
pub const BASEBALL_SPEED_M_PER_S: f64 = 44.704;

/// A regulation baseball at 100 mph in sea-level air, starting from a pure
/// state half a Planck length wide and evolving for its flight time.
pub fn baseball_scenario() -> Scenario {
    Scenario {
        name: "baseball".into(),
        particle: FreeParticle::new(BASEBALL_MASS_KG, Some(BASEBALL_RADIUS_M))
            .expect("preset particle is valid"),
        scattering: Scattering::Air(AirModel::us_standard_sea_level()),
        initial_dx_planck_lengths: 0.5,
        evolution: EvolutionTime::FlightTime,
        speed: Some(BASEBALL_SPEED_M_PER_S),
        sample_times: Vec::new(),
        observation: Some(ObservationSpec {
            centers_m: vec![-600.0, -300.0, 0.0, 300.0, 600.0],
            // wide enough in momentum to pass the chirp p/ħ ~ 1e35 m^-1
            alpha_per_m2: 1e72,
            gamma_per_m2: 1e-4,
        }),
        compare_with: Some(Reference::Baseball),
        decoherence: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Evenly spaced trajectory samples when the scenario gives none.
    pub samples: usize,
    pub profile: ToleranceProfile,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            samples: 11,
            profile: ToleranceProfile::Paper,
        }
    }
}

/// Tolerance for the two routes to τ in Planck units.
const TAU_AGREEMENT: f64 = 1e-9;
/// Tolerance for Σ p_n ⟨Δx_n²⟩ against 1/(8C).
const VARIANCE_AGREEMENT: f64 = 1e-12;

pub fn run(scenario: &Scenario) -> Result<Report> {
    run_with(scenario, &RunOptions::default())
}

/// Runs the whole pipeline. Either every stage succeeds or nothing is
/// returned.
pub fn run_with(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    scenario.validate()?;
    let k = PhysicalConstants::codata();
    let l_pl = k.planck_length;
    let particle = &scenario.particle;
    let m = particle.mass();

    let env = match &scenario.scattering {
        Scattering::Air(air) => air_environment(air, particle, &k)?,
        Scattering::Environment(env) => *env,
    };
    let big = big_lambda(&env);
    let lambda_si = if scenario.decoherence {
        lambda_coefficient(big, particle, &k)?
    } else {
        0.0
    };
    let lambda = planck_scaled(lambda_si, -4)?;

    let t_end = scenario.evolution_time(&k);
    let tau_si = tau_from_time(t_end, particle, &k)?;
    let tau = planck_scaled(tau_si, 2)?;
    let tau_native = (t_end / k.planck_time()) * (k.natural_mass_unit() / m);
    if ((tau - tau_native) / tau).abs() > TAU_AGREEMENT {
        return Err(Error::Validation(format!(
            "tau from SI ({tau:e}) and from Planck time ({tau_native:e}) disagree"
        )));
    }

    let dx0 = scenario.initial_dx_planck_lengths;
    let initial = minimum_uncertainty_initial(dx0 * dx0, LengthUnit::PlanckLength)?;
    let cubic = cubic_from_initial(&initial, lambda)?;
    let state = cubic.evolve(tau)?;

    if cubic.uncertainty_product(tau) < 0.25 * (1.0 - 1e-12) {
        return Err(Error::Validation(
            "uncertainty product fell below 1/4".into(),
        ));
    }
    let weighted = weighted_position_variance(&state);
    if ((weighted - state.position_variance()) / state.position_variance()).abs()
        > VARIANCE_AGREEMENT
    {
        return Err(Error::Validation(format!(
            "eigenstate-weighted variance {weighted:e} differs from 1/(8C) = {:e}",
            state.position_variance()
        )));
    }

    let spectrum = SpectralSummary::of(&state);
    let si = state.to_unit(LengthUnit::Meter)?;
    let averaged_si = si.with_b(0.0)?;
    let omega = 4.0 * k.hbar * (si.a() * si.c()).sqrt() / m;
    let period_years = 2.0 * std::f64::consts::PI / omega / SECONDS_PER_YEAR;

    let tau_per_second = tau / t_end;
    let family = EvolvedFamily::new(cubic, tau_per_second)?;

    let mut rows = Vec::new();
    let mut push =
        |name: &str, value: f64, unit: &str| rows.push((name.to_string(), value, unit.to_string()));

    if let Some(v) = scenario.speed {
        push("momentum_kg_m_per_s", m * v, "kg m/s");
    }
    push("mass_oz", m / KG_PER_OUNCE, "oz");
    if let Some(v) = scenario.speed {
        push("flight_time_s", flight_time(v, &k), "s");
    }
    push("evolution_time_s", t_end, "s");
    if let Scattering::Air(air) = &scenario.scattering {
        push("air_rms_velocity_m_per_s", air.rms_velocity(&k), "m/s");
    }
    push("cross_section_m2", env.cross_section, "m^2");
    push("localization_rate_per_m2_s", big, "m^-2 s^-1");
    push("lambda_per_m4", lambda_si, "m^-4");
    push("lambda_planck", lambda, "l_Pl^-4");
    if let (Scattering::Air(air), true) = (&scenario.scattering, scenario.decoherence) {
        let composite = lambda_composite(air, particle, &k)?;
        push("lambda_composite_per_m4", composite, "m^-4");
        push("lambda_chain_over_composite", lambda_si / composite, "1");
    }
    push("tau_m2", tau_si, "m^2");
    push("tau_planck", tau, "l_Pl^2");
    push("tau_planck_native", tau_native, "l_Pl^2");
    push("position_variance_planck", cubic.x(tau), "l_Pl^2");
    push("dx_rms_m", si.position_variance().sqrt(), "m");
    push(
        "momentum_variance_planck",
        momentum_variance(&cubic, tau),
        "p_Pl^2",
    );
    push(
        "momentum_rms_kg_m_per_s",
        k.hbar * momentum_variance(&cubic, tau).sqrt() / l_pl,
        "kg m/s",
    );
    push("momentum_shift_planck", 3.0 * lambda * tau, "p_Pl^2");
    push(
        "uncertainty_product",
        cubic.uncertainty_product(tau),
        "hbar^2",
    );
    push("a_planck", state.a(), "l_Pl^-2");
    push("b_planck", state.b(), "l_Pl^-2");
    push("c_planck", state.c(), "l_Pl^-2");
    push("mean_excitation", spectrum.mean_excitation, "1");
    push("entropy_nats", spectrum.entropy_nats, "nat");
    push("purity", purity(&state), "1");
    push("p0", spectrum.p0, "1");
    push("truncation_index", spectrum.truncation_index as f64, "1");
    push("captured_mass", spectrum.captured_mass, "1");
    push(
        "ground_state_variance_m2",
        eigenstate_position_variance(&si, 0),
        "m^2",
    );
    push(
        "weighted_position_variance_m2",
        weighted_position_variance(&si),
        "m^2",
    );
    push("oscillator_period_years", period_years, "yr");
    if lambda > 0.0 {
        let leading = 2.0 * std::f64::consts::PI * m * (tau_si / lambda_si).sqrt()
            / (k.hbar * 2.0 * dx0 * l_pl);
        push(
            "oscillator_period_leading_years",
            leading / SECONDS_PER_YEAR,
            "yr",
        );
    }
    // kinetic energy of the rms momentum when no speed is given
    let speed = scenario
        .speed
        .unwrap_or_else(|| k.hbar * momentum_variance(&cubic, tau).sqrt() / (l_pl * m));
    let averaging = k.h / (0.5 * m * speed * speed);
    push("averaging_timescale_s", averaging, "s");
    push(
        "averaging_timescale_over_evolution_time",
        averaging / t_end,
        "1",
    );
    push("averaged_a_per_m2", averaged_si.a(), "m^-2");
    push("averaged_a_significand", significand(averaged_si.a()), "1");
    push("averaged_c_per_m2", averaged_si.c(), "m^-2");
    if lambda > 0.0 {
        let scaling = averaged_time_scalings(&family, t_end)?;
        push(
            "averaged_a_time_exponent",
            log_slope(&family, t_end, |s| s.a)?,
            "1",
        );
        push(
            "averaged_c_time_exponent",
            log_slope(&family, t_end, |s| s.c)?,
            "1",
        );
        push(
            "mean_excitation_time_exponent",
            log_slope(&family, t_end, |s| s.mean_excitation)?,
            "1",
        );
        push(
            "entropy_growth_coefficient",
            entropy_growth_coefficient(&family, t_end)?,
            "nat",
        );
        push("entropy_leading_order", scaling.entropy_leading, "nat");
        push(
            "leading_order_deviation",
            scaling.leading_order_deviation(),
            "1",
        );
    }

    let scalars: Vec<ScalarRow> = rows
        .into_iter()
        .map(|(name, value, unit)| {
            if !value.is_finite() {
                return Err(Error::Validation(format!("{name} is not finite")));
            }
            let published = scenario.compare_with.and_then(|_| lookup(&name));
            Ok(ScalarRow::new(
                name,
                value,
                unit,
                published,
                options.profile,
            ))
        })
        .collect::<Result<_>>()?;

    let trajectory = trajectory(scenario, &family, t_end, options.samples, l_pl)?;
    let observation = match &scenario.observation {
        Some(obs) => measure_profile(&obs.centers_m, obs.alpha_per_m2, obs.gamma_per_m2, &si)?,
        None => Vec::new(),
    };
    let discrepancies = scalars.iter().filter_map(Discrepancy::from_row).collect();

    Ok(Report {
        scenario: scenario.name.clone(),
        tolerance_profile: options.profile,
        scalars,
        trajectory,
        observation,
        discrepancies,
    })
}

fn significand(v: f64) -> f64 {
    v / 10f64.powi(v.abs().log10().floor() as i32)
}

fn trajectory(
    scenario: &Scenario,
    family: &EvolvedFamily,
    t_end: f64,
    samples: usize,
    l_pl: f64,
) -> Result<Vec<TrajectoryRow>> {
    let times: Vec<f64> = if scenario.sample_times.is_empty() {
        let n = samples.max(2);
        (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
    } else {
        scenario.sample_times.clone()
    };
    times
        .into_iter()
        .map(|t| {
            let tau = family.tau(t);
            let state = family.cubic.evolve(tau)?;
            let n = mean_excitation(&state);
            let per_area = 1.0 / (l_pl * l_pl);
            Ok(TrajectoryRow {
                t_s: t,
                tau: tau * l_pl * l_pl,
                dx2: family.cubic.x(tau) * l_pl * l_pl,
                dp2: momentum_variance(&family.cubic, tau) * per_area,
                a: state.a() * per_area,
                b: state.b() * per_area,
                c: state.c() * per_area,
                n,
                s: von_neumann_entropy(n),
            })
        })
        .collect()
}
