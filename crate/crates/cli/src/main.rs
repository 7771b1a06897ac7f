//! `wellbeing` command-line interface.
//!
//! Exit codes: 0 on success, 1 on numerical/runtime failure, 2 on invalid
//! input.

mod commands;
mod numfmt;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wellbeing::calibration::Sensitivities;
use wellbeing::Tolerance;

use crate::commands::{CalibrationRequest, SweepSpec};
use crate::numfmt::num;
use crate::scenario::Scenario;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Ode,
    Both,
}

#[derive(Parser)]
#[command(name = "wellbeing", version, about = "Two-group well-being dynamics under unequal income growth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the long-run regime of a scenario.
    Classify {
        #[arg(long)]
        scenario: PathBuf,
        /// Relative tolerance at regime boundaries.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a well-being trajectory as CSV.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long = "t-end")]
        t_end: f64,
        #[arg(long, value_enum, default_value_t = Mode::Closed)]
        mode: Mode,
        /// Integration tolerance (adaptive ODE and quadrature).
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a scenario over a grid of one parameter.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// NAME=START:STOP:STEP with NAME one of a, a_star, b, b_star, lambda, n.
        #[arg(long)]
        vary: SweepSpec,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the income growth rate from a (year, income) series.
    Calibrate {
        #[arg(long, conflicts_with = "dataset")]
        series: Option<PathBuf>,
        /// Bundled series name, e.g. chile_gdp_percapita.
        #[arg(long)]
        dataset: Option<String>,
        /// Also write a scenario file built from the fit.
        #[arg(long = "scenario-out", requires = "n")]
        scenario_out: Option<PathBuf>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long = "a-star", default_value_t = 1.0)]
        a_star: f64,
        #[arg(long, default_value_t = 0.05)]
        b: f64,
        #[arg(long = "b-star", default_value_t = 0.05)]
        b_star: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn boundary_tolerance(scenario: &Scenario, flag: Option<f64>) -> Result<Tolerance, Failure> {
    match flag {
        None => Ok(scenario.epsilon),
        Some(e) => Tolerance::new(e).ok_or_else(|| Failure::Input(format!("--tolerance must be non-negative, got {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { scenario, tolerance, out } => {
            let mut scenario = Scenario::load(&scenario)?;
            scenario.epsilon = boundary_tolerance(&scenario, tolerance)?;
            emit(out.as_deref(), &commands::classify_report(&scenario))
        }
        Command::Simulate {
            scenario,
            t_end,
            mode,
            tolerance,
            out,
        } => {
            let mut scenario = Scenario::load(&scenario)?;
            if let Some(tol) = tolerance {
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(Failure::Input(format!("--tolerance must be positive, got {tol}")));
                }
                scenario.quad_tolerance = tol;
                if let wellbeing::StepControl::Adaptive { tolerance, .. } = &mut scenario.control {
                    *tolerance = tol;
                }
            }
            let sim = commands::simulate(&scenario, t_end, mode)?;
            emit(out.as_deref(), &sim.table)?;
            if let Some(dev) = sim.max_deviation {
                eprintln!("max_relative_deviation = {}", num(dev));
            }
            Ok(())
        }
        Command::Sweep {
            scenario,
            vary,
            tolerance,
            out,
        } => {
            let scenario = Scenario::load(&scenario)?;
            let tol = boundary_tolerance(&scenario, tolerance)?;
            emit(out.as_deref(), &commands::sweep(&scenario, &vary, tol))
        }
        Command::Calibrate {
            series,
            dataset,
            scenario_out,
            n,
            a,
            a_star,
            b,
            b_star,
            out,
        } => {
            let series = commands::load_series(series.as_deref(), dataset.as_deref())?;
            let report = commands::calibrate(&CalibrationRequest {
                series: &series,
                scenario_out: scenario_out.as_deref(),
                n,
                sensitivities: Sensitivities { a, a_star, b, b_star },
            })?;
            emit(out.as_deref(), &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Input(msg) | Failure::Runtime(msg)) = &failure;
            eprintln!("error: {msg}");
            ExitCode::from(failure.exit_code())
        }
    }
}
