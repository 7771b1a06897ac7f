//! Scenario files: TOML documents with a strict key set.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wellbeing::dynamics::{DEFAULT_STEP, DEFAULT_TOLERANCE};
use wellbeing::{IncomeModel, ScenarioParams, StepControl, Tolerance};

use crate::Failure;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub a: f64,
    pub a_star: f64,
    pub b: f64,
    pub b_star: f64,
    pub lambda: f64,
    pub n: f64,
    #[serde(rename = "B0", default = "one")]
    pub b0: f64,
    #[serde(rename = "B0_star", default = "one")]
    pub b0_star: f64,
    #[serde(default = "one")]
    pub p0: f64,
    #[serde(default)]
    pub t0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub income_model: Option<IncomeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerics: Option<Numerics>,
}

/// Income of `G`; `G*` always earns `n` times as much.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum IncomeSpec {
    /// `p0·e^{λ(t − t0)}`, the default.
    Exponential,
    /// `p0·(1 + rate·(t − t0))`.
    Linear { rate: f64 },
    /// `[time, income]` pairs, interpolated log-linearly.
    Tabulated { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Dopri,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    pub method: Option<Method>,
    /// Fixed RK4 step.
    pub step: Option<f64>,
    /// Relative tolerance of the adaptive integrator.
    pub tolerance: Option<f64>,
    pub quad_tolerance: Option<f64>,
    /// Relative tolerance at regime boundaries.
    pub epsilon: Option<f64>,
    /// Spacing of output rows in `simulate`.
    pub sample_interval: Option<f64>,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub income_g: IncomeModel,
    pub income_g_star: IncomeModel,
    pub control: StepControl,
    pub quad_tolerance: f64,
    pub epsilon: Tolerance,
    pub sample_interval: f64,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError(e.message().to_string()))?;
        file.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<wellbeing::Error> for ScenarioError {
    fn from(e: wellbeing::Error) -> Self {
        ScenarioError(e.to_string())
    }
}

fn positive_setting(key: &str, value: Option<f64>, default: f64) -> Result<f64, ScenarioError> {
    match value {
        None => Ok(default),
        Some(v) if v.is_finite() && v > 0.0 => Ok(v),
        Some(v) => Err(ScenarioError(format!("numerics.{key} must be positive, got {v}"))),
    }
}

impl ScenarioFile {
    pub fn validate(&self) -> Result<Scenario, ScenarioError> {
        let params = ScenarioParams::new(self.a, self.a_star, self.b, self.b_star, self.lambda, self.n)?
            .with_initial_wellbeing(self.b0, self.b0_star)?
            .with_initial_income(self.p0)?
            .with_start_time(self.t0)?;
        let income_g = match &self.income_model {
            None | Some(IncomeSpec::Exponential) => params.income_g(),
            Some(IncomeSpec::Linear { rate }) => IncomeModel::linear(self.p0, *rate, self.t0)
                .map_err(|e| ScenarioError(format!("income_model.rate: {e}")))?,
            Some(IncomeSpec::Tabulated { points }) => IncomeModel::tabulated(points.iter().map(|[t, v]| (*t, *v)))
                .map_err(|e| ScenarioError(format!("income_model.points: {e}")))?,
        };
        let income_g_star = income_g.scaled(self.n)?;

        let numerics = self.numerics.clone().unwrap_or_default();
        let control = match numerics.method.unwrap_or(Method::Rk4) {
            Method::Rk4 => StepControl::fixed(positive_setting("step", numerics.step, DEFAULT_STEP)?),
            Method::Dopri => {
                StepControl::adaptive(positive_setting("tolerance", numerics.tolerance, DEFAULT_TOLERANCE)?)
            }
        };
        let epsilon = match numerics.epsilon {
            None => Tolerance::default(),
            Some(e) => Tolerance::new(e)
                .ok_or_else(|| ScenarioError(format!("numerics.epsilon must be non-negative, got {e}")))?,
        };
        Ok(Scenario {
            params,
            income_g,
            income_g_star,
            control,
            quad_tolerance: positive_setting("quad_tolerance", numerics.quad_tolerance, 1e-10)?,
            epsilon,
            sample_interval: positive_setting("sample_interval", numerics.sample_interval, 1.0)?,
        })
    }
}
