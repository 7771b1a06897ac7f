//! Two-group well-being dynamics under unequal, growing incomes.
//!
//! Each group's well-being rises with proportional gains in its own income
//! and erodes at a rate scaled by the other group's income relative to its
//! own. The crate provides the closed-form solutions and their ratio
//! analysis ([`model`]), long-run regime classification ([`regime`]), an
//! independent numerical path ([`dynamics`]), and calibration against income
//! data ([`calibration`], [`datasets`]).

pub mod calibration;
pub mod datasets;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod regime;
pub mod tolerance;

pub use calibration::{fit_growth_rate, scenario_from_data, GrowthFit, IncomeSeries, Sensitivities};
pub use dynamics::income::IncomeModel;
pub use dynamics::{cross_validate, integrate, integrate_at, Sample, StepControl, Trajectory};
pub use error::{Error, Result};
pub use model::{
    closed_form_b, closed_form_b_star, exponent_g, exponent_g_star, general_wellbeing, ratio_analysis,
    relative_value, wellbeing_ratio, GroupParams, Param, RatioAnalysis, ScenarioParams,
};
pub use regime::{classify, Band, Dominance, GrowthCase, LongRun, OpenInterval, RegimeReport};
pub use tolerance::Tolerance;
