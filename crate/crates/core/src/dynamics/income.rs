//! Income trajectories `p(t)`.

use crate::error::{finite, positive, Error, Result};

/// An income trajectory with value and time derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum IncomeModel {
    /// `p0·e^{rate·(t − origin)}`.
    Exponential { p0: f64, rate: f64, origin: f64 },
    /// `p0·(1 + rate·(t − origin))`.
    Linear { p0: f64, rate: f64, origin: f64 },
    /// Log-linear interpolation through strictly increasing, positive samples.
    Tabulated(Table),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn span(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    fn value(&self, t: f64) -> f64 {
        let (lo, hi) = self.span();
        let t = t.clamp(lo, hi);
        // index of the first sample strictly after t, kept inside [1, len-1]
        let i = self
            .times
            .partition_point(|&x| x <= t)
            .clamp(1, self.times.len() - 1);
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let w = (t - t0) / (t1 - t0);
        v0 * (v1 / v0).powf(w)
    }

    fn derivative(&self, t: f64) -> f64 {
        let (lo, hi) = self.span();
        let h = 1e-6 * (hi - lo);
        if t - h < lo {
            (self.value(t + h) - self.value(t)) / h
        } else if t + h > hi {
            (self.value(t) - self.value(t - h)) / h
        } else {
            (self.value(t + h) - self.value(t - h)) / (2.0 * h)
        }
    }
}

impl IncomeModel {
    pub fn exponential(p0: f64, rate: f64, origin: f64) -> Result<Self> {
        Ok(Self::Exponential {
            p0: positive("p0", p0)?,
            rate: finite("rate", rate)?,
            origin: finite("origin", origin)?,
        })
    }

    pub fn linear(p0: f64, rate: f64, origin: f64) -> Result<Self> {
        Ok(Self::Linear {
            p0: positive("p0", p0)?,
            rate: finite("rate", rate)?,
            origin: finite("origin", origin)?,
        })
    }

    /// Needs at least two samples with strictly increasing finite times and
    /// strictly positive finite values.
    pub fn tabulated(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (times, values): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if times.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "tabulated income needs at least 2 samples, got {}",
                times.len()
            )));
        }
        for (i, (&t, &v)) in times.iter().zip(&values).enumerate() {
            if !t.is_finite() {
                return Err(Error::Domain(format!("tabulated sample {i}: time {t} is not finite")));
            }
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "tabulated sample {i}: income {v} at t = {t} is not strictly positive"
                )));
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::Domain(format!(
                    "tabulated sample {i}: times must be strictly increasing"
                )));
            }
        }
        Ok(Self::Tabulated(Table { times, values }))
    }

    /// The same trajectory multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let factor = positive("factor", factor)?;
        Ok(match self {
            Self::Exponential { p0, rate, origin } => Self::Exponential {
                p0: p0 * factor,
                rate: *rate,
                origin: *origin,
            },
            Self::Linear { p0, rate, origin } => Self::Linear {
                p0: p0 * factor,
                rate: *rate,
                origin: *origin,
            },
            Self::Tabulated(table) => Self::Tabulated(Table {
                times: table.times.clone(),
                values: table.values.iter().map(|v| v * factor).collect(),
            }),
        })
    }

    /// The same trajectory delayed by `delta` time units.
    pub fn shifted(&self, delta: f64) -> Self {
        match self {
            Self::Exponential { p0, rate, origin } => Self::Exponential {
                p0: *p0,
                rate: *rate,
                origin: origin + delta,
            },
            Self::Linear { p0, rate, origin } => Self::Linear {
                p0: *p0,
                rate: *rate,
                origin: origin + delta,
            },
            Self::Tabulated(table) => Self::Tabulated(Table {
                times: table.times.iter().map(|t| t + delta).collect(),
                values: table.values.clone(),
            }),
        }
    }

    /// Income at `t`. Tabulated incomes are held constant outside their
    /// sample range; call [`validate_horizon`](Self::validate_horizon) first.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::Exponential { p0, rate, origin } => p0 * (rate * (t - origin)).exp(),
            Self::Linear { p0, rate, origin } => p0 * (1.0 + rate * (t - origin)),
            Self::Tabulated(table) => table.value(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Self::Exponential { rate, .. } => rate * self.value(t),
            Self::Linear { p0, rate, .. } => p0 * rate,
            Self::Tabulated(table) => table.derivative(t),
        }
    }

    /// Checks that the income stays strictly positive (and, for tables, is
    /// defined) on `[start, end]`.
    pub fn validate_horizon(&self, start: f64, end: f64, which: &'static str) -> Result<()> {
        match self {
            Self::Exponential { .. } => {
                for t in [start, end] {
                    let v = self.value(t);
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::NonPositiveIncome { which, t, value: v });
                    }
                }
                Ok(())
            }
            // affine, so positivity at both ends is enough
            Self::Linear { .. } => {
                for t in [start, end] {
                    let v = self.value(t);
                    if v.is_nan() || v <= 0.0 {
                        return Err(Error::NonPositiveIncome { which, t, value: v });
                    }
                }
                Ok(())
            }
            Self::Tabulated(table) => {
                let (lo, hi) = table.span();
                if start < lo || end > hi {
                    return Err(Error::Domain(format!(
                        "{which} income table covers [{lo}, {hi}] but [{start}, {end}] was requested"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }
}
