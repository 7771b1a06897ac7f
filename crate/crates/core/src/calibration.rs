//! Calibration of the growth rate from income data, and summaries of
//! published inequality indicators.

use std::fmt;
use std::str::FromStr;

use crate::error::{positive, Error, Result};
use crate::model::ScenarioParams;

/// `(time, income)` observations with strictly increasing times and
/// positive incomes.
#[derive(Debug, Clone, PartialEq)]
pub struct IncomeSeries {
    points: Vec<(f64, f64)>,
}

impl IncomeSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "an income series needs at least 2 points, got {}",
                points.len()
            )));
        }
        for (i, &(t, v)) in points.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::Domain(format!("point {i}: time {t} is not finite")));
            }
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("point {i}: income {v} is not strictly positive")));
            }
            if i > 0 && t <= points[i - 1].0 {
                return Err(Error::Domain(format!("point {i}: times must be strictly increasing")));
            }
        }
        Ok(Self { points })
    }

    /// Parses a two-column text table. Columns are separated by a comma or
    /// whitespace; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            if fields.len() != 2 {
                return Err(parse_err(format!("expected 2 columns, found {}", fields.len())));
            }
            let t: f64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("bad time `{}`", fields[0])))?;
            let v: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad value `{}`", fields[1])))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(parse_err(format!("income must be positive, got {v}")));
            }
            if let Some(&(prev, _)) = points.last() {
                if t <= prev {
                    return Err(parse_err("times must be strictly increasing".into()));
                }
            }
            points.push((t, v));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Result of a log-linear growth fit `ln p(t) ≈ ln p0 + λ·(t − t_ref)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub lambda: f64,
    /// Fitted income at `t_ref`.
    pub p0: f64,
    /// Reference time: the first observation.
    pub t_ref: f64,
    /// Root-mean-square residual of `ln(income)`.
    pub residual_rms: f64,
}

/// Least-squares fit of `ln(income)` against time.
pub fn fit_growth_rate(series: &IncomeSeries) -> GrowthFit {
    let pts = series.points();
    let t_ref = pts[0].0;
    let count = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t - t_ref).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / count;
    let y_mean = ys.iter().sum::<f64>() / count;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let lambda = sxy / sxx;
    let intercept = y_mean - lambda * x_mean;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + lambda * x);
            r * r
        })
        .sum();
    GrowthFit {
        lambda,
        p0: intercept.exp(),
        t_ref,
        residual_rms: (ss / count).sqrt(),
    }
}

/// User-supplied sensitivities; the data do not identify them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivities {
    pub a: f64,
    pub a_star: f64,
    pub b: f64,
    pub b_star: f64,
}

/// Builds a scenario from a growth fit. `B0 = B0* = 1`, `p0` and `t0` come
/// from the fit. Fails when the fitted rate is not positive.
pub fn scenario_from_data(fit: &GrowthFit, n_estimate: f64, s: Sensitivities) -> Result<ScenarioParams> {
    positive("n", n_estimate)?;
    ScenarioParams::new(s.a, s.a_star, s.b, s.b_star, fit.lambda, n_estimate)?
        .with_initial_income(fit.p0)?
        .with_start_time(fit.t_ref)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    Gini,
    /// Top decile over the bottom four deciles.
    Palma,
    Q5Q1,
    D10D1,
}

impl Indicator {
    pub fn name(self) -> &'static str {
        match self {
            Indicator::Gini => "gini",
            Indicator::Palma => "palma",
            Indicator::Q5Q1 => "q5q1",
            Indicator::D10D1 => "d10d1",
        }
    }

    /// Whether the indicator is an income ratio, usable as an estimate of `n`.
    pub fn is_ratio(self) -> bool {
        !matches!(self, Indicator::Gini)
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Indicator::Gini, Indicator::Palma, Indicator::Q5Q1, Indicator::D10D1]
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown inequality indicator `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityRecord {
    pub indicator: Indicator,
    pub year: i32,
    pub value: f64,
}

impl InequalityRecord {
    /// Gini must lie in `(0, 1)`; ratio indicators must be at least 1.
    pub fn new(indicator: Indicator, year: i32, value: f64) -> Result<Self> {
        let ok = match indicator {
            Indicator::Gini => value > 0.0 && value < 1.0,
            _ => value.is_finite() && value >= 1.0,
        };
        if !ok {
            return Err(Error::Domain(format!("{indicator} value {value} is out of range")));
        }
        Ok(Self { indicator, year, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalitySummary {
    pub indicator: Indicator,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean and range of the records carrying `indicator`.
pub fn summarize_inequality(records: &[InequalityRecord], indicator: Indicator) -> Result<InequalitySummary> {
    let values: Vec<f64> = records
        .iter()
        .filter(|r| r.indicator == indicator)
        .map(|r| r.value)
        .collect();
    if values.is_empty() {
        return Err(Error::InsufficientData(format!("no {indicator} records")));
    }
    Ok(InequalitySummary {
        indicator,
        mean: values.iter().sum::<f64>() / values.len() as f64,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
