use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("time {t} precedes the start time {t0}")]
    BeforeStart { t: f64, t0: f64 },

    #[error("{which} income is not positive at t = {t} (value {value})")]
    NonPositiveIncome {
        which: &'static str,
        t: f64,
        value: f64,
    },

    #[error("adaptive quadrature exceeded the maximum depth (partial value {partial}, error estimate {error_estimate})")]
    QuadratureDepth { partial: f64, error_estimate: f64 },

    #[error("integration failed after t = {last_time} (B = {last_b}, B* = {last_b_star}): {reason}")]
    Integration {
        last_time: f64,
        last_b: f64,
        last_b_star: f64,
        reason: String,
    },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "finite and strictly positive",
        })
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            requirement: "finite",
        })
    }
}
