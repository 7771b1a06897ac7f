//! Closed-form mathematics of the two-group model.
//!
//! Group `G` earns `p(t)`, group `G*` earns `q(t) = n·p(t)`. Well-being in
//! each group obeys
//!
//! ```text
//! dB/dt  = (a·p'/p − b·q/p)·B
//! dB*/dt = (a*·q'/q − b*·p/q)·B*
//! ```
//!
//! With exponential income `p(t) = p0·e^{λ(t−t0)}` both solutions are pure
//! exponentials with rates `aλ − b·n` and `a*λ − b*/n`.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::income::IncomeModel;
use crate::dynamics::quadrature::adaptive_simpson;
use crate::error::{finite, positive, Error, Result};

/// Full parameter tuple of one model instance.
///
/// All fields except `t0` are strictly positive and finite; construction
/// enforces it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    a: f64,
    a_star: f64,
    b: f64,
    b_star: f64,
    lambda: f64,
    n: f64,
    b0: f64,
    b0_star: f64,
    p0: f64,
    t0: f64,
}

/// The sweepable model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    A,
    AStar,
    B,
    BStar,
    Lambda,
    N,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::A,
        Param::AStar,
        Param::B,
        Param::BStar,
        Param::Lambda,
        Param::N,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::AStar => "a_star",
            Param::B => "b",
            Param::BStar => "b_star",
            Param::Lambda => "lambda",
            Param::N => "n",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown parameter `{s}`")))
    }
}

impl ScenarioParams {
    /// Builds a scenario with `B0 = B0* = 1`, `p0 = 1` and `t0 = 0`.
    pub fn new(a: f64, a_star: f64, b: f64, b_star: f64, lambda: f64, n: f64) -> Result<Self> {
        Ok(Self {
            a: positive("a", a)?,
            a_star: positive("a_star", a_star)?,
            b: positive("b", b)?,
            b_star: positive("b_star", b_star)?,
            lambda: positive("lambda", lambda)?,
            n: positive("n", n)?,
            b0: 1.0,
            b0_star: 1.0,
            p0: 1.0,
            t0: 0.0,
        })
    }

    pub fn with_initial_wellbeing(mut self, b0: f64, b0_star: f64) -> Result<Self> {
        self.b0 = positive("B0", b0)?;
        self.b0_star = positive("B0_star", b0_star)?;
        Ok(self)
    }

    pub fn with_initial_income(mut self, p0: f64) -> Result<Self> {
        self.p0 = positive("p0", p0)?;
        Ok(self)
    }

    pub fn with_start_time(mut self, t0: f64) -> Result<Self> {
        self.t0 = finite("t0", t0)?;
        Ok(self)
    }

    /// Returns a copy with one sweepable parameter replaced.
    pub fn with(mut self, param: Param, value: f64) -> Result<Self> {
        let value = positive(param.name(), value)?;
        match param {
            Param::A => self.a = value,
            Param::AStar => self.a_star = value,
            Param::B => self.b = value,
            Param::BStar => self.b_star = value,
            Param::Lambda => self.lambda = value,
            Param::N => self.n = value,
        }
        Ok(self)
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::A => self.a,
            Param::AStar => self.a_star,
            Param::B => self.b,
            Param::BStar => self.b_star,
            Param::Lambda => self.lambda,
            Param::N => self.n,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn a_star(&self) -> f64 {
        self.a_star
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn b_star(&self) -> f64 {
        self.b_star
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn b0(&self) -> f64 {
        self.b0
    }
    pub fn b0_star(&self) -> f64 {
        self.b0_star
    }
    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Sensitivities and initial level of group `G`.
    pub fn group_g(&self) -> GroupParams {
        GroupParams {
            a: self.a,
            b: self.b,
            b0: self.b0,
        }
    }

    /// Sensitivities and initial level of group `G*`.
    pub fn group_g_star(&self) -> GroupParams {
        GroupParams {
            a: self.a_star,
            b: self.b_star,
            b0: self.b0_star,
        }
    }

    /// Exponential income path of `G` implied by `(p0, λ, t0)`.
    pub fn income_g(&self) -> IncomeModel {
        IncomeModel::exponential(self.p0, self.lambda, self.t0)
            .expect("validated parameters give a valid income model")
    }

    /// Income path of `G*`, i.e. `n` times that of `G`.
    pub fn income_g_star(&self) -> IncomeModel {
        self.income_g()
            .scaled(self.n)
            .expect("validated parameters give a valid income model")
    }
}

/// Sensitivities `(a, b)` and initial well-being of one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    pub a: f64,
    pub b: f64,
    pub b0: f64,
}

/// The symmetric relative value `[[x]]`: `x` when `x >= 1`, else `1/x`.
pub fn relative_value(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "relative value needs a finite positive ratio, got {x}"
        )));
    }
    Ok(if x >= 1.0 { x } else { x.recip() })
}

/// Growth rate of `B` under exponential income: `aλ − b·n`.
pub fn exponent_g(params: &ScenarioParams) -> f64 {
    exponent_g_at(params, params.n)
}

pub fn exponent_g_at(params: &ScenarioParams, n: f64) -> f64 {
    params.a * params.lambda - params.b * n
}

/// Growth rate of `B*` under exponential income: `a*λ − b*/n`.
pub fn exponent_g_star(params: &ScenarioParams) -> f64 {
    exponent_g_star_at(params, params.n)
}

pub fn exponent_g_star_at(params: &ScenarioParams, n: f64) -> f64 {
    params.a_star * params.lambda - params.b_star / n
}

fn elapsed(params: &ScenarioParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < params.t0 {
        return Err(Error::BeforeStart { t, t0: params.t0 });
    }
    Ok(t - params.t0)
}

/// `B(t) = B0·exp{(aλ − b·n)(t − t0)}`.
pub fn closed_form_b(params: &ScenarioParams, t: f64) -> Result<f64> {
    let dt = elapsed(params, t)?;
    Ok(params.b0 * (exponent_g(params) * dt).exp())
}

/// `B*(t) = B0*·exp{(a*λ − b*/n)(t − t0)}`.
pub fn closed_form_b_star(params: &ScenarioParams, t: f64) -> Result<f64> {
    let dt = elapsed(params, t)?;
    Ok(params.b0_star * (exponent_g_star(params) * dt).exp())
}

/// `B(t)/B*(t) = (B0/B0*)·e^{g·(t − t0)}` with the exact log-ratio rate `g`.
pub fn wellbeing_ratio(params: &ScenarioParams, t: f64) -> Result<f64> {
    let dt = elapsed(params, t)?;
    Ok(params.b0 / params.b0_star * (log_ratio_rate(params, params.n) * dt).exp())
}

/// Exact rate of `ln(B/B*)`: `(a − a*)λ − (b·n − b*/n)`.
pub fn log_ratio_rate(params: &ScenarioParams, n: f64) -> f64 {
    (params.a - params.a_star) * params.lambda - (params.b * n - params.b_star / n)
}

/// The sign quadratic `f(n) = b·n² − (a − a*)·λ·n − b*`, equal to `−n·g(n)`.
pub fn sign_quadratic(params: &ScenarioParams, n: f64) -> f64 {
    params.b * n * n - (params.a - params.a_star) * params.lambda * n - params.b_star
}

/// Discriminant `(a − a*)²λ² + 4·b·b*` of the sign quadratic.
pub fn discriminant(params: &ScenarioParams) -> f64 {
    let lin = (params.a - params.a_star) * params.lambda;
    lin * lin + 4.0 * params.b * params.b_star
}

/// The unique positive root of the sign quadratic.
pub fn critical_inequality(params: &ScenarioParams) -> f64 {
    let lin = (params.a - params.a_star) * params.lambda;
    let sqrt_d = discriminant(params).sqrt();
    // Avoid cancellation when lin is large and negative: use the product of
    // roots, −b*/b.
    if lin >= 0.0 {
        (lin + sqrt_d) / (2.0 * params.b)
    } else {
        2.0 * params.b_star / (sqrt_d - lin)
    }
}

/// Ratio analysis of `B/B*` at the scenario's `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioAnalysis {
    pub g_rate: f64,
    pub f_value: f64,
    pub discriminant: f64,
    pub n_hat: f64,
}

pub fn ratio_analysis(params: &ScenarioParams) -> RatioAnalysis {
    RatioAnalysis {
        g_rate: log_ratio_rate(params, params.n),
        f_value: sign_quadratic(params, params.n),
        discriminant: discriminant(params),
        n_hat: critical_inequality(params),
    }
}

/// Well-being under arbitrary positive incomes:
///
/// `B(t) = B0·[p(t)/p(t0)]^a · exp{−b ∫_{t0}^{t} q(s)/p(s) ds}`.
///
/// `own` is the group's income and `other` the comparison income, so `G*`
/// is evaluated by passing `(q, p)` with `params.group_g_star()`.
pub fn general_wellbeing(
    own: &IncomeModel,
    other: &IncomeModel,
    group: GroupParams,
    t0: f64,
    t: f64,
    quad_tol: f64,
) -> Result<f64> {
    if t.is_nan() || t < t0 {
        return Err(Error::BeforeStart { t, t0 });
    }
    positive("quad_tol", quad_tol)?;
    own.validate_horizon(t0, t, "own")?;
    other.validate_horizon(t0, t, "other")?;
    let integral = if t > t0 {
        adaptive_simpson(|s| other.value(s) / own.value(s), t0, t, quad_tol)?.value
    } else {
        0.0
    };
    let growth = (own.value(t) / own.value(t0)).powf(group.a);
    Ok(group.b0 * growth * (-group.b * integral).exp())
}
