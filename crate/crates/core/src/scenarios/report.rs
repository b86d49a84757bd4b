//! Report rows and their CSV, JSON and text renderings.
//!
//! Values are emitted at 9 significant digits and deviations at 3, so two
//! runs of the same scenario produce identical bytes.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use super::reference::{PublishedValue, ToleranceProfile};
use crate::observation::ProfilePoint;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarRow {
    pub name: String,
    pub value: f64,
    pub unit: String,
    pub reference_value: Option<f64>,
    /// (value - reference) / reference.
    pub relative_deviation: Option<f64>,
    pub tolerance: Option<String>,
    pub within_tolerance: Option<bool>,
    #[serde(skip)]
    published: Option<&'static PublishedValue>,
}

impl ScalarRow {
    pub(crate) fn new(
        name: String,
        value: f64,
        unit: String,
        published: Option<&'static PublishedValue>,
        profile: ToleranceProfile,
    ) -> Self {
        let (reference_value, relative_deviation, tolerance, within_tolerance) = match published {
            Some(p) => {
                let tol = p.tolerance(profile);
                (
                    Some(p.value),
                    Some((value - p.value) / p.value),
                    Some(tol.to_string()),
                    Some(tol.accepts(value, p.value)),
                )
            }
            None => (None, None, None, None),
        };
        Self {
            name,
            value,
            unit,
            reference_value,
            relative_deviation,
            tolerance,
            within_tolerance,
            published,
        }
    }
}

/// A published figure the computation does not reproduce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub name: String,
    pub statement: String,
    pub reference_value: f64,
    pub computed_value: f64,
    pub relative_deviation: f64,
    pub description: String,
}

impl Discrepancy {
    pub(crate) fn from_row(row: &ScalarRow) -> Option<Self> {
        let p = row.published?;
        if row.within_tolerance? {
            return None;
        }
        Some(Self {
            name: row.name.clone(),
            statement: p.statement.to_string(),
            reference_value: p.value,
            computed_value: row.value,
            relative_deviation: row.relative_deviation.unwrap_or(f64::NAN),
            description: p
                .explanation
                .unwrap_or("computed value lies outside the tolerance of the published figure")
                .to_string(),
        })
    }
}

/// One sample of the evolution, in SI units: τ and Δx² in m², (Δp/ħ)²,
/// A, B and C in m⁻².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t_s: f64,
    pub tau: f64,
    pub dx2: f64,
    pub dp2: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: f64,
    pub s: f64,
}

impl TrajectoryRow {
    fn values(&self) -> [f64; 9] {
        [
            self.t_s, self.tau, self.dx2, self.dp2, self.a, self.b, self.c, self.n, self.s,
        ]
    }
}

pub const TRAJECTORY_HEADER: &str = "t_s,tau,dx2,dp2,A,B,C,N,S";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub tolerance_profile: ToleranceProfile,
    pub scalars: Vec<ScalarRow>,
    pub trajectory: Vec<TrajectoryRow>,
    pub observation: Vec<ProfilePoint>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Report {
    pub fn scalar(&self, name: &str) -> Option<&ScalarRow> {
        self.scalars.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or text)"
            )),
        }
    }
}

/// -0.0 prints as 0.
fn unsigned_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn v9(x: f64) -> String {
    format!("{:.8e}", unsigned_zero(x))
}

fn d3(x: f64) -> String {
    format!("{x:.2e}")
}

fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return unsigned_zero(x);
    }
    format!("{x:.*e}", digits - 1).parse().unwrap_or(x)
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Csv => emit_csv(report),
        Format::Json => emit_json(report),
        Format::Text => emit_text(report),
    }
}

/// The trajectory table. Scalars and the ledger go to the other formats.
fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for row in &report.trajectory {
        let cells: Vec<String> = row.values().iter().map(|&v| v9(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn emit_json(report: &Report) -> String {
    let opt = |v: Option<f64>, d: usize| v.map_or(Value::Null, |x| json!(round_sig(x, d)));
    let scalars: Vec<Value> = report
        .scalars
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "value": round_sig(r.value, 9),
                "unit": r.unit,
                "reference_value": opt(r.reference_value, 9),
                "relative_deviation": opt(r.relative_deviation, 3),
                "tolerance": r.tolerance,
                "within_tolerance": r.within_tolerance,
            })
        })
        .collect();
    let trajectory: Vec<Value> = report
        .trajectory
        .iter()
        .map(|row| {
            let v = row.values().map(|x| round_sig(x, 9));
            json!({
                "t_s": v[0], "tau": v[1], "dx2": v[2], "dp2": v[3],
                "A": v[4], "B": v[5], "C": v[6], "N": v[7], "S": v[8],
            })
        })
        .collect();
    let observation: Vec<Value> = report
        .observation
        .iter()
        .map(|p| json!({ "center_m": round_sig(p.center, 9), "measure": round_sig(p.measure, 9) }))
        .collect();
    let discrepancies: Vec<Value> = report
        .discrepancies
        .iter()
        .map(|d| {
            json!({
                "name": d.name,
                "statement": d.statement,
                "reference_value": round_sig(d.reference_value, 9),
                "computed_value": round_sig(d.computed_value, 9),
                "relative_deviation": round_sig(d.relative_deviation, 3),
                "description": d.description,
            })
        })
        .collect();
    let doc = json!({
        "scenario": report.scenario,
        "tolerance_profile": report.tolerance_profile,
        "scalars": scalars,
        "trajectory": trajectory,
        "observation": observation,
        "discrepancies": discrepancies,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
    text.push('\n');
    text
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let profile = match report.tolerance_profile {
        ToleranceProfile::Paper => "paper",
        ToleranceProfile::Strict => "strict",
    };
    let _ = writeln!(
        out,
        "scenario: {}  (tolerance profile: {profile})",
        report.scenario
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<40} {:>16} {:<12} {:>16} {:>10} {:<14} {}",
        "quantity", "value", "unit", "reference", "deviation", "tolerance", "status"
    );
    for r in &report.scalars {
        let reference = r.reference_value.map_or(String::new(), v9);
        let deviation = r.relative_deviation.map_or(String::new(), d3);
        let status = match r.within_tolerance {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None => "",
        };
        let _ = writeln!(
            out,
            "{:<40} {:>16} {:<12} {:>16} {:>10} {:<14} {}",
            r.name,
            v9(r.value),
            r.unit,
            reference,
            deviation,
            r.tolerance.as_deref().unwrap_or(""),
            status
        );
    }
    if !report.trajectory.is_empty() {
        let _ = writeln!(out, "\ntrajectory");
        let _ = writeln!(out, "{}", TRAJECTORY_HEADER.replace(',', "  "));
        for row in &report.trajectory {
            let cells: Vec<String> = row.values().iter().map(|&v| v9(v)).collect();
            let _ = writeln!(out, "{}", cells.join("  "));
        }
    }
    if !report.observation.is_empty() {
        let _ = writeln!(out, "\nobservation profile");
        for p in &report.observation {
            let _ = writeln!(out, "{:>16} m  {:>16}", v9(p.center), v9(p.measure));
        }
    }
    let _ = writeln!(out, "\ndiscrepancies: {}", report.discrepancies.len());
    for d in &report.discrepancies {
        let _ = writeln!(out, "- {}: {}", d.name, d.statement);
        let _ = writeln!(
            out,
            "  reference {}  computed {}  deviation {}",
            v9(d.reference_value),
            v9(d.computed_value),
            d3(d.relative_deviation)
        );
        let _ = writeln!(out, "  {}", d.description);
    }
    out
}
