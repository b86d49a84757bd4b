//! TOML scenario files.
//!
//! Every key carries its unit in its name. Sections: `scenario`,
//! `particle`, exactly one of `air` / `environment`, and an optional
//! `observation`.

use std::collections::BTreeSet;

use thiserror::Error;
use toml::{Table, Value};

use super::{EvolutionTime, ObservationSpec, Reference, Scattering, Scenario};
use crate::model::{AirModel, FreeParticle, ScatteringEnvironment};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("missing key `{key}` in [{section}]")]
    MissingKey { section: String, key: String },

    #[error("unknown keys in [{section}]: {}", keys.join(", "))]
    UnknownKeys { section: String, keys: Vec<String> },

    #[error("ambiguous scattering: give exactly one of [air] or [environment]")]
    AmbiguousScattering,

    #[error("`{key}` in [{section}] must be {expected}")]
    WrongType {
        section: String,
        key: String,
        expected: &'static str,
    },

    #[error("invalid value for `{key}` in [{section}]: {message}")]
    Invalid {
        section: String,
        key: String,
        message: String,
    },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    /// Stable identifier for each error class.
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "parse",
            ConfigError::MissingKey { .. } => "missing_key",
            ConfigError::UnknownKeys { .. } => "unknown_keys",
            ConfigError::AmbiguousScattering => "ambiguous_scattering",
            ConfigError::WrongType { .. } => "wrong_type",
            ConfigError::Invalid { .. } => "invalid_value",
            ConfigError::Io { .. } => "io",
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

struct Section<'a> {
    name: &'a str,
    table: &'a Table,
    seen: BTreeSet<&'static str>,
}

impl<'a> Section<'a> {
    fn new(name: &'a str, table: &'a Table) -> Self {
        Self {
            name,
            table,
            seen: BTreeSet::new(),
        }
    }

    fn missing(&self, key: &str) -> ConfigError {
        ConfigError::MissingKey {
            section: self.name.to_string(),
            key: key.to_string(),
        }
    }

    fn wrong(&self, key: &str, expected: &'static str) -> ConfigError {
        ConfigError::WrongType {
            section: self.name.to_string(),
            key: key.to_string(),
            expected,
        }
    }

    fn opt_f64(&mut self, key: &'static str) -> Result<Option<f64>> {
        self.seen.insert(key);
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Float(v)) => Ok(Some(*v)),
            Some(Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(_) => Err(self.wrong(key, "a number")),
        }
    }

    fn f64(&mut self, key: &'static str) -> Result<f64> {
        self.opt_f64(key)?.ok_or_else(|| self.missing(key))
    }

    fn opt_str(&mut self, key: &'static str) -> Result<Option<&'a str>> {
        self.seen.insert(key);
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(self.wrong(key, "a string")),
        }
    }

    fn opt_bool(&mut self, key: &'static str) -> Result<Option<bool>> {
        self.seen.insert(key);
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(_) => Err(self.wrong(key, "a boolean")),
        }
    }

    fn opt_list(&mut self, key: &'static str) -> Result<Option<Vec<f64>>> {
        self.seen.insert(key);
        match self.table.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Float(f) => Ok(*f),
                    Value::Integer(i) => Ok(*i as f64),
                    _ => Err(self.wrong(key, "an array of numbers")),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.wrong(key, "an array of numbers")),
        }
    }

    fn invalid(&self, key: &str, err: impl std::fmt::Display) -> ConfigError {
        ConfigError::Invalid {
            section: self.name.to_string(),
            key: key.to_string(),
            message: err.to_string(),
        }
    }

    fn finish(self) -> Result<()> {
        let unknown: Vec<String> = self
            .table
            .keys()
            .filter(|k| !self.seen.contains(k.as_str()))
            .cloned()
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::UnknownKeys {
                section: self.name.to_string(),
                keys: unknown,
            })
        }
    }
}

fn section<'a>(root: &'a Table, name: &str) -> Result<Option<&'a Table>> {
    match root.get(name) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(ConfigError::WrongType {
            section: String::new(),
            key: name.to_string(),
            expected: "a table",
        }),
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |p| before.len() - p - 1)
        + 1;
    (line, column)
}

pub fn load_scenario(config_text: &str) -> Result<Scenario> {
    let root: Table = config_text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e
            .span()
            .map_or((0, 0), |s| line_column(config_text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;

    const SECTIONS: [&str; 5] = ["scenario", "particle", "air", "environment", "observation"];
    let unknown: Vec<String> = root
        .keys()
        .filter(|k| !SECTIONS.contains(&k.as_str()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(ConfigError::UnknownKeys {
            section: "<root>".into(),
            keys: unknown,
        });
    }

    let empty = Table::new();
    let mut sc = Section::new("scenario", section(&root, "scenario")?.unwrap_or(&empty));
    let name = sc.opt_str("name")?.unwrap_or("scenario").to_string();
    let initial_dx = sc.f64("initial_dx_planck_lengths")?;
    let speed = sc.opt_f64("speed_m_per_s")?;
    let evolution = match sc.opt_f64("evolution_time_s")? {
        Some(t) => EvolutionTime::Seconds(t),
        None if speed.is_some() => EvolutionTime::FlightTime,
        None => return Err(sc.missing("evolution_time_s")),
    };
    let sample_times = sc.opt_list("sample_times_s")?.unwrap_or_default();
    let decoherence = sc.opt_bool("decoherence")?.unwrap_or(true);
    let compare_with = match sc.opt_str("compare_with")? {
        None => None,
        Some("baseball") => Some(Reference::Baseball),
        Some(other) => {
            return Err(sc.invalid("compare_with", format!("unknown reference `{other}`")))
        }
    };
    sc.finish()?;

    let particle_table = section(&root, "particle")?.ok_or_else(|| ConfigError::MissingKey {
        section: "<root>".into(),
        key: "particle".into(),
    })?;
    let mut pt = Section::new("particle", particle_table);
    let mass = pt.f64("mass_kg")?;
    let radius = pt.opt_f64("radius_m")?;
    let particle =
        FreeParticle::new(mass, radius).map_err(|e| pt.invalid("mass_kg/radius_m", e))?;
    pt.finish()?;

    let scattering = match (section(&root, "air")?, section(&root, "environment")?) {
        (Some(_), Some(_)) => return Err(ConfigError::AmbiguousScattering),
        (None, None) => {
            return Err(ConfigError::MissingKey {
                section: "<root>".into(),
                key: "air".into(),
            })
        }
        (Some(t), None) => {
            let mut s = Section::new("air", t);
            let air = AirModel::new(
                s.f64("molecular_mass_kg")?,
                s.f64("mass_density_kg_per_m3")?,
                s.f64("temperature_K")?,
            )
            .map_err(|e| s.invalid("air", e))?;
            s.finish()?;
            if particle.radius().is_none() {
                return Err(ConfigError::MissingKey {
                    section: "particle".into(),
                    key: "radius_m".into(),
                });
            }
            Scattering::Air(air)
        }
        (None, Some(t)) => {
            let mut s = Section::new("environment", t);
            let env = ScatteringEnvironment::new(
                s.f64("number_density_per_m3")?,
                s.f64("cross_section_m2")?,
                s.f64("mean_relative_velocity_m_per_s")?,
                s.f64("rms_wavenumber_per_m")?,
            )
            .map_err(|e| s.invalid("environment", e))?;
            s.finish()?;
            Scattering::Environment(env)
        }
    };

    let observation = match section(&root, "observation")? {
        None => None,
        Some(t) => {
            let mut s = Section::new("observation", t);
            let centers = s
                .opt_list("centers_m")?
                .ok_or_else(|| s.missing("centers_m"))?;
            let spec = ObservationSpec {
                centers_m: centers,
                alpha_per_m2: s.f64("alpha_per_m2")?,
                gamma_per_m2: s.f64("gamma_per_m2")?,
            };
            s.finish()?;
            Some(spec)
        }
    };

    let scenario = Scenario {
        name,
        particle,
        scattering,
        initial_dx_planck_lengths: initial_dx,
        evolution,
        speed,
        sample_times,
        observation,
        compare_with,
        decoherence,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Inverse of [`load_scenario`].
pub fn to_config_text(scenario: &Scenario) -> String {
    let mut root = Table::new();

    let mut sc = Table::new();
    sc.insert("name".into(), Value::String(scenario.name.clone()));
    sc.insert(
        "initial_dx_planck_lengths".into(),
        Value::Float(scenario.initial_dx_planck_lengths),
    );
    if let Some(v) = scenario.speed {
        sc.insert("speed_m_per_s".into(), Value::Float(v));
    }
    if let EvolutionTime::Seconds(t) = scenario.evolution {
        sc.insert("evolution_time_s".into(), Value::Float(t));
    }
    if !scenario.sample_times.is_empty() {
        sc.insert("sample_times_s".into(), float_array(&scenario.sample_times));
    }
    if !scenario.decoherence {
        sc.insert("decoherence".into(), Value::Boolean(false));
    }
    if let Some(Reference::Baseball) = scenario.compare_with {
        sc.insert("compare_with".into(), Value::String("baseball".into()));
    }
    root.insert("scenario".into(), Value::Table(sc));

    let mut pt = Table::new();
    pt.insert("mass_kg".into(), Value::Float(scenario.particle.mass()));
    if let Some(r) = scenario.particle.radius() {
        pt.insert("radius_m".into(), Value::Float(r));
    }
    root.insert("particle".into(), Value::Table(pt));

    match &scenario.scattering {
        Scattering::Air(air) => {
            let mut t = Table::new();
            t.insert("molecular_mass_kg".into(), Value::Float(air.molecular_mass));
            t.insert(
                "mass_density_kg_per_m3".into(),
                Value::Float(air.mass_density),
            );
            t.insert("temperature_K".into(), Value::Float(air.temperature));
            root.insert("air".into(), Value::Table(t));
        }
        Scattering::Environment(env) => {
            let mut t = Table::new();
            t.insert(
                "number_density_per_m3".into(),
                Value::Float(env.number_density),
            );
            t.insert("cross_section_m2".into(), Value::Float(env.cross_section));
            t.insert(
                "mean_relative_velocity_m_per_s".into(),
                Value::Float(env.mean_relative_velocity),
            );
            t.insert(
                "rms_wavenumber_per_m".into(),
                Value::Float(env.rms_wavenumber),
            );
            root.insert("environment".into(), Value::Table(t));
        }
    }

    if let Some(obs) = &scenario.observation {
        let mut t = Table::new();
        t.insert("centers_m".into(), float_array(&obs.centers_m));
        t.insert("alpha_per_m2".into(), Value::Float(obs.alpha_per_m2));
        t.insert("gamma_per_m2".into(), Value::Float(obs.gamma_per_m2));
        root.insert("observation".into(), Value::Table(t));
    }

    toml::to_string(&root).expect("scenario tables always serialize")
}

fn float_array(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| Value::Float(v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::baseball_scenario;

    const MINIMAL: &str = r#"
[scenario]
initial_dx_planck_lengths = 0.5
evolution_time_s = 2.0

[particle]
mass_kg = 0.2
radius_m = 0.03

[air]
molecular_mass_kg = 4.8e-26
mass_density_kg_per_m3 = 1.2
temperature_K = 290.0
"#;

    #[test]
    fn preset_round_trip() {
        let preset = baseball_scenario();
        let text = to_config_text(&preset);
        assert_eq!(load_scenario(&text).unwrap(), preset);
    }

    #[test]
    fn minimal_config_loads() {
        let s = load_scenario(MINIMAL).unwrap();
        assert_eq!(s.evolution, EvolutionTime::Seconds(2.0));
        assert!(s.decoherence);
        assert_eq!(s.compare_with, None);
    }

    #[test]
    fn missing_mass_is_named() {
        let text = MINIMAL.replace("mass_kg = 0.2\n", "");
        let err = load_scenario(&text).unwrap_err();
        assert_eq!(
            err,
            ConfigError::MissingKey {
                section: "particle".into(),
                key: "mass_kg".into()
            }
        );
        assert_eq!(err.kind(), "missing_key");
    }

    #[test]
    fn both_scattering_blocks_are_ambiguous() {
        let text = format!(
            "{MINIMAL}\n[environment]\nnumber_density_per_m3 = 1.0\ncross_section_m2 = 1.0\n\
             mean_relative_velocity_m_per_s = 1.0\nrms_wavenumber_per_m = 1.0\n"
        );
        assert_eq!(
            load_scenario(&text).unwrap_err(),
            ConfigError::AmbiguousScattering
        );
    }

    #[test]
    fn unknown_keys_listed() {
        let text = MINIMAL.replace(
            "radius_m = 0.03",
            "radius_m = 0.03\ncolour = \"white\"\nspin_rpm = 2000",
        );
        match load_scenario(&text).unwrap_err() {
            ConfigError::UnknownKeys { section, keys } => {
                assert_eq!(section, "particle");
                assert_eq!(keys, vec!["colour".to_string(), "spin_rpm".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        let text = format!("{MINIMAL}\n[weather]\nrain = true\n");
        assert_eq!(load_scenario(&text).unwrap_err().kind(), "unknown_keys");
    }

    #[test]
    fn parse_error_position() {
        let text = "[scenario]\ninitial_dx_planck_lengths = = 0.5\n";
        match load_scenario(text).unwrap_err() {
            ConfigError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invariant_violations() {
        let text = MINIMAL.replace("evolution_time_s = 2.0", "evolution_time_s = -2.0");
        assert_eq!(load_scenario(&text).unwrap_err().kind(), "invalid_value");
        let text = MINIMAL.replace(
            "initial_dx_planck_lengths = 0.5",
            "initial_dx_planck_lengths = 0.0",
        );
        assert_eq!(load_scenario(&text).unwrap_err().kind(), "invalid_value");
        let text = MINIMAL.replace("evolution_time_s = 2.0", "");
        assert_eq!(load_scenario(&text).unwrap_err().kind(), "missing_key");
        let text = MINIMAL.replace("temperature_K = 290.0", "temperature_K = \"warm\"");
        assert_eq!(load_scenario(&text).unwrap_err().kind(), "wrong_type");
        let text = MINIMAL.replace("radius_m = 0.03\n", "");
        assert_eq!(
            load_scenario(&text).unwrap_err(),
            ConfigError::MissingKey {
                section: "particle".into(),
                key: "radius_m".into()
            }
        );
    }
}
