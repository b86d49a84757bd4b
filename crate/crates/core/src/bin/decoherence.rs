use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use decoherence::evolution::{minimum_uncertainty_initial, GaussianDensityMatrix};
use decoherence::observation::{make_operator, measure, measure_profile};
use decoherence::oracle::{compare_evolution, compare_spectrum, quadrature};
use decoherence::scenarios::{
    baseball_scenario, emit, load_scenario, run_with, ConfigError, Format, RunOptions, Scenario,
    ToleranceProfile,
};
use decoherence::spectral::SpectralSummary;
use decoherence::units::LengthUnit;
use decoherence::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "decoherence",
    version,
    about = "Gaussian decoherence of a free particle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// csv, json or text
    #[arg(long, default_value = "text")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Trajectory samples when the scenario lists no times.
    #[arg(long, default_value_t = 11)]
    samples: usize,
    /// strict or paper
    #[arg(long, default_value = "paper")]
    tolerance_profile: ToleranceProfile,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Run the built-in baseball scenario.
    Baseball {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Check the closed forms against grid integration at O(1) parameters.
    OracleCheck {
        #[command(flatten)]
        out: Output,
    },
    /// Observation profile of a scenario's final state.
    Measure {
        /// Scenario file; the baseball preset when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Operator centers in metres, overriding the scenario.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        centers: Option<Vec<f64>>,
        /// Off-diagonal width parameter in m^-2.
        #[arg(long)]
        alpha: Option<f64>,
        /// Diagonal localization parameter in m^-2.
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Spectral summary of an explicit state.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        /// planck or meter
        #[arg(long, default_value = "planck")]
        unit: String,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Library(Error),
    Io(String),
    Oracle(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_VALIDATION,
            };
            ExitCode::from(code)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Oracle(msg)) => {
            eprintln!("oracle disagreement: {msg}");
            ExitCode::from(EXIT_ORACLE)
        }
    }
}

fn read_scenario(path: &PathBuf) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::Library(Error::Config(ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }))
    })?;
    Ok(load_scenario(&text).map_err(Error::from)?)
}

fn write(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, run, out } => {
            let scenario = read_scenario(&config)?;
            report(&scenario, &run, &out)
        }
        Command::Baseball { run, out } => report(&baseball_scenario(), &run, &out),
        Command::OracleCheck { out } => oracle_check(&out),
        Command::Measure {
            config,
            centers,
            alpha,
            gamma,
            out,
        } => {
            let scenario = match &config {
                Some(path) => read_scenario(path)?,
                None => baseball_scenario(),
            };
            measure_command(scenario, centers, alpha, gamma, &out)
        }
        Command::Spectrum { a, b, c, unit, out } => {
            let unit = match unit.as_str() {
                "planck" => LengthUnit::PlanckLength,
                "meter" | "m" => LengthUnit::Meter,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown unit `{other}` (expected planck or meter)"
                    ))
                    .into())
                }
            };
            let state = GaussianDensityMatrix::new(a, b, c, unit)?;
            let s = SpectralSummary::of(&state);
            let text = match out.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&json!(s)).expect("summary serializes")),
                Format::Csv => format!(
                    "mean_excitation,entropy_nats,p0,truncation_index,captured_mass\n{:.8e},{:.8e},{:.8e},{},{:.8e}\n",
                    s.mean_excitation, s.entropy_nats, s.p0, s.truncation_index, s.captured_mass
                ),
                Format::Text => format!(
                    "mean excitation   {:.8e}\nentropy (nats)    {:.8e}\np0                {:.8e}\ntruncation index  {}\ncaptured mass     {:.8e}\n",
                    s.mean_excitation, s.entropy_nats, s.p0, s.truncation_index, s.captured_mass
                ),
            };
            write(&out, &text)
        }
    }
}

fn report(scenario: &Scenario, run: &RunArgs, out: &Output) -> Result<(), Failure> {
    let options = RunOptions {
        samples: run.samples,
        profile: run.tolerance_profile,
    };
    let report = run_with(scenario, &options)?;
    write(out, &emit(&report, out.format))
}

fn measure_command(
    mut scenario: Scenario,
    centers: Option<Vec<f64>>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    out: &Output,
) -> Result<(), Failure> {
    let mut spec =
        scenario
            .observation
            .clone()
            .unwrap_or(decoherence::scenarios::ObservationSpec {
                centers_m: Vec::new(),
                alpha_per_m2: 0.0,
                gamma_per_m2: 0.0,
            });
    if let Some(c) = centers {
        spec.centers_m = c;
    }
    if let Some(a) = alpha {
        spec.alpha_per_m2 = a;
    }
    if let Some(g) = gamma {
        spec.gamma_per_m2 = g;
    }
    scenario.observation = Some(spec);
    scenario.validate().map_err(Error::from)?;
    let report = run_with(&scenario, &RunOptions::default())?;
    let text = match out.format {
        Format::Csv | Format::Text => {
            let mut s = String::from("center_m,measure\n");
            for p in &report.observation {
                s.push_str(&format!("{:.8e},{:.8e}\n", p.center, p.measure));
            }
            s
        }
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!(report.observation)).expect("profile serializes")
        ),
    };
    write(out, &text)
}

/// Thresholds of the grid suite.
const COEFFICIENT_TOLERANCE: f64 = 1e-3;
const EIGENVALUE_TOLERANCE: f64 = 1e-4;
const OVERLAP_FLOOR: f64 = 0.999;
const MEASURE_TOLERANCE: f64 = 1e-8;

fn oracle_check(out: &Output) -> Result<(), Failure> {
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    let mut record = |name: String, value: f64, ok: bool| {
        lines.push(json!({ "check": name, "value": value, "pass": ok }));
        if !ok {
            failures.push(name);
        }
    };

    for &(lambda, tau, a0) in &[(1.0, 0.3, 0.5), (0.5, 0.2, 0.8), (2.0, 0.1, 0.4)] {
        let state = minimum_uncertainty_initial(a0, LengthUnit::PlanckLength)?;
        let cmp =
            compare_evolution(&state, lambda, tau).map_err(|e| Failure::Oracle(e.to_string()))?;
        let worst = cmp.coefficient_error().max(cmp.momentum_variance_error);
        record(
            format!("evolution lambda={lambda} tau={tau} a0={a0}"),
            worst,
            worst <= COEFFICIENT_TOLERANCE,
        );
    }

    let mixed = GaussianDensityMatrix::new(0.75, -0.5, 0.0625, LengthUnit::PlanckLength)?;
    let spec = compare_spectrum(&mixed, 6, 400).map_err(|e| Failure::Oracle(e.to_string()))?;
    record(
        "spectrum eigenvalues".into(),
        spec.worst_eigenvalue_error(),
        spec.worst_eigenvalue_error() <= EIGENVALUE_TOLERANCE,
    );
    record(
        "spectrum overlaps".into(),
        spec.worst_overlap(),
        spec.worst_overlap() >= OVERLAP_FLOOR,
    );

    let op = make_operator(1.0, 2.0, 0.5, LengthUnit::PlanckLength)?;
    let closed = measure(&op, &mixed)?;
    let quad = quadrature::trace_product(&op, &mixed, -25.0, 25.0, 1001).re;
    let err = ((closed - quad) / closed).abs();
    record(
        "measure vs quadrature".into(),
        err,
        err <= MEASURE_TOLERANCE,
    );

    let profile = measure_profile(&[-1.0, 1.0], 2.0, 0.5, &mixed)?;
    let parity = (profile[0].measure - profile[1].measure).abs();
    let flipped = measure(&op, &mixed.with_b(-mixed.b())?)?;
    let sym = parity.max((flipped - closed).abs());
    record("measure symmetries".into(), sym, sym <= 1e-10);

    let text = match out.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!(lines)).expect("checks serialize")
        ),
        Format::Csv | Format::Text => {
            let mut s = String::new();
            for l in &lines {
                s.push_str(&format!(
                    "{:<4} {:<40} {:.3e}\n",
                    if l["pass"].as_bool() == Some(true) {
                        "ok"
                    } else {
                        "FAIL"
                    },
                    l["check"].as_str().unwrap_or_default(),
                    l["value"].as_f64().unwrap_or(f64::NAN)
                ));
            }
            s
        }
    };
    write(out, &text)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Oracle(failures.join("; ")))
    }
}
