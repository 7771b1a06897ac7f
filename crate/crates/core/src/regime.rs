//! Long-run regime classification.
//!
//! Under exponential income the two well-being curves are pure exponentials,
//! so their fate is fixed by the signs of `aλ − b·n` and `a*λ − b*/n`. The
//! zero-exponent boundaries `aλ/b` and `b*/(a*λ)` split the inequality axis
//! into three bands, and their order is set by comparing `λ²` with
//! `b·b*/(a·a*)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{critical_inequality, log_ratio_rate, ScenarioParams};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthCase {
    /// `λ² < b·b*/(a·a*)`
    LowGrowth,
    /// `λ² > b·b*/(a·a*)`
    HighGrowth,
    /// equality within tolerance
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Low,
    Medium,
    High,
    /// `n` sits on a zero-exponent boundary.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LongRun {
    DivergesToInfinity,
    ConstantPositive,
    DecaysToZero,
}

/// Which group ends up better off when both start at the same level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    G,
    GStar,
    Equal,
}

macro_rules! display_as_debug {
    ($($ty:ty),*) => {$(
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(self, f)
            }
        }
    )*};
}

display_as_debug!(GrowthCase, Band, LongRun);

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::G => "G",
            Dominance::GStar => "G_star",
            Dominance::Equal => "Equal",
        })
    }
}

/// Open interval `]lower, upper[`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenInterval {
    pub lower: f64,
    pub upper: f64,
}

impl OpenInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub growth_case: GrowthCase,
    /// `aλ/b`, where the exponent of `B` vanishes.
    pub boundary_g: f64,
    /// `b*/(a*λ)`, where the exponent of `B*` vanishes.
    pub boundary_g_star: f64,
    pub band: Band,
    pub behavior_g: LongRun,
    pub behavior_g_star: LongRun,
    pub n_hat: f64,
    /// Band where both groups grow; only present in high growth.
    pub interval_j: Option<OpenInterval>,
    /// Assumes `B0 = B0*`.
    pub dominance: Dominance,
    /// `n < 1`: the income-favored group is `G`, not `G*`.
    pub roles_reversed: bool,
    /// When `B0 ≠ B0*`, the time after `t0` at which `B = B*`, if it lies
    /// in the future.
    pub crossover_time: Option<f64>,
}

pub fn growth_case(params: &ScenarioParams, tol: Tolerance) -> GrowthCase {
    let lhs = params.lambda() * params.lambda();
    let rhs = params.b() * params.b_star() / (params.a() * params.a_star());
    match tol.compare(lhs, rhs) {
        Ordering::Less => GrowthCase::LowGrowth,
        Ordering::Greater => GrowthCase::HighGrowth,
        Ordering::Equal => GrowthCase::Critical,
    }
}

pub fn boundary_g(params: &ScenarioParams) -> f64 {
    params.a() * params.lambda() / params.b()
}

pub fn boundary_g_star(params: &ScenarioParams) -> f64 {
    params.b_star() / (params.a_star() * params.lambda())
}

fn long_run(growth: f64, decay: f64, tol: Tolerance) -> LongRun {
    match tol.compare(growth, decay) {
        Ordering::Greater => LongRun::DivergesToInfinity,
        Ordering::Equal => LongRun::ConstantPositive,
        Ordering::Less => LongRun::DecaysToZero,
    }
}

/// Position of `n` among the ordered boundaries.
pub fn band(params: &ScenarioParams, tol: Tolerance) -> Band {
    let (g, gs) = (boundary_g(params), boundary_g_star(params));
    let n = params.n();
    if tol.is_close(n, g) || tol.is_close(n, gs) {
        return Band::Boundary;
    }
    let (lo, hi) = if g <= gs { (g, gs) } else { (gs, g) };
    if n < lo {
        Band::Low
    } else if n > hi {
        Band::High
    } else {
        Band::Medium
    }
}

pub fn classify(params: &ScenarioParams, tol: Tolerance) -> RegimeReport {
    let lambda = params.lambda();
    let n = params.n();
    let n_hat = critical_inequality(params);
    let dominance = match tol.compare(n, n_hat) {
        Ordering::Less => Dominance::G,
        Ordering::Greater => Dominance::GStar,
        Ordering::Equal => Dominance::Equal,
    };
    let g_rate = log_ratio_rate(params, n);
    let initial_gap = (params.b0() / params.b0_star()).ln();
    let crossover_time = if initial_gap != 0.0 && g_rate != 0.0 {
        Some(initial_gap / -g_rate).filter(|t| *t > 0.0 && t.is_finite())
    } else {
        None
    };
    RegimeReport {
        growth_case: growth_case(params, tol),
        boundary_g: boundary_g(params),
        boundary_g_star: boundary_g_star(params),
        band: band(params, tol),
        behavior_g: long_run(params.a() * lambda, params.b() * n, tol),
        behavior_g_star: long_run(params.a_star() * lambda, params.b_star() / n, tol),
        n_hat,
        interval_j: double_positive_interval(params, tol),
        dominance,
        roles_reversed: n < 1.0,
        crossover_time,
    }
}

/// The interval `]b*/(a*λ), aλ/b[` of inequality levels where both groups'
/// well-being grows. Absent unless it is nonempty beyond tolerance.
pub fn double_positive_interval(params: &ScenarioParams, tol: Tolerance) -> Option<OpenInterval> {
    let (lower, upper) = (boundary_g_star(params), boundary_g(params));
    (tol.compare(upper, lower) == Ordering::Greater).then_some(OpenInterval { lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowBandFeasibility {
    /// Whether some `n ≥ 1` lies in the low band.
    pub feasible: bool,
    /// `a*λ/b*`; must be below 1.
    pub star_ratio: f64,
    /// `aλ/b`; must exceed 1.
    pub own_ratio: f64,
    /// Upper end of the low band, `min(aλ/b, b*/(a*λ))`.
    pub low_band_upper: f64,
}

/// Checks whether the low-inequality band, where `G` grows and `G*` decays,
/// contains an admissible `n ≥ 1`. That requires `a*λ/b* < 1 < aλ/b`.
pub fn low_band_feasibility(params: &ScenarioParams, tol: Tolerance) -> LowBandFeasibility {
    let own_ratio = boundary_g(params);
    let star_ratio = params.a_star() * params.lambda() / params.b_star();
    let feasible =
        tol.compare(star_ratio, 1.0) == Ordering::Less && tol.compare(own_ratio, 1.0) == Ordering::Greater;
    LowBandFeasibility {
        feasible,
        star_ratio,
        own_ratio,
        low_band_upper: own_ratio.min(boundary_g_star(params)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketCheck {
    pub growth_case: GrowthCase,
    pub lower: f64,
    pub n_hat: f64,
    pub upper: f64,
    pub pass: bool,
}

/// Checks that `n̂` lies strictly between the two zero-exponent boundaries,
/// in the order dictated by the growth case.
pub fn verify_nhat_bracketing(params: &ScenarioParams, tol: Tolerance) -> Result<BracketCheck> {
    let growth_case = growth_case(params, tol);
    let (g, gs) = (boundary_g(params), boundary_g_star(params));
    let (lower, upper) = match growth_case {
        GrowthCase::LowGrowth => (g, gs),
        GrowthCase::HighGrowth => (gs, g),
        GrowthCase::Critical => {
            return Err(Error::NotApplicable("n̂ bracketing is undefined in the critical growth case"))
        }
    };
    let n_hat = critical_inequality(params);
    Ok(BracketCheck {
        growth_case,
        lower,
        n_hat,
        upper,
        pass: lower < n_hat && n_hat < upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, a_star: f64, b: f64, b_star: f64, lambda: f64, n: f64) -> ScenarioParams {
        ScenarioParams::new(a, a_star, b, b_star, lambda, n).unwrap()
    }

    const TOL: Tolerance = Tolerance::DEFAULT;

    #[test]
    fn growth_cases() {
        assert_eq!(growth_case(&p(1.0, 1.0, 0.2, 0.2, 0.1, 1.0), TOL), GrowthCase::LowGrowth);
        assert_eq!(growth_case(&p(1.0, 1.0, 0.05, 0.05, 0.1, 1.0), TOL), GrowthCase::HighGrowth);
        // λ = √(b·b*/(a·a*)) = √(0.5·0.02/(2·0.5)) = 0.1
        assert_eq!(growth_case(&p(2.0, 0.5, 0.5, 0.02, 0.1, 1.0), TOL), GrowthCase::Critical);
    }

    #[test]
    fn classify_low_growth_medium_band() {
        let r = classify(&p(1.0, 1.0, 0.2, 0.2, 0.1, 1.0), TOL);
        assert_eq!(r.growth_case, GrowthCase::LowGrowth);
        assert_eq!(r.band, Band::Medium);
        assert_eq!(r.behavior_g, LongRun::DecaysToZero);
        assert_eq!(r.behavior_g_star, LongRun::DecaysToZero);
        assert!(r.interval_j.is_none());
        // symmetric, n = n̂ = 1
        assert_eq!(r.dominance, Dominance::Equal);
    }

    #[test]
    fn classify_low_growth_high_band() {
        let r = classify(&p(1.0, 1.0, 0.2, 0.2, 0.1, 10.0), TOL);
        assert_eq!(r.band, Band::High);
        assert_eq!(r.behavior_g, LongRun::DecaysToZero);
        assert_eq!(r.behavior_g_star, LongRun::DivergesToInfinity);
        assert_eq!(r.dominance, Dominance::GStar);
    }

    #[test]
    fn classify_high_growth_in_j() {
        let r = classify(&p(1.0, 1.0, 0.05, 0.05, 0.1, 1.5), TOL);
        assert_eq!(r.growth_case, GrowthCase::HighGrowth);
        assert_eq!(r.band, Band::Medium);
        assert_eq!(r.behavior_g, LongRun::DivergesToInfinity);
        assert_eq!(r.behavior_g_star, LongRun::DivergesToInfinity);
        assert!((r.n_hat - 1.0).abs() < 1e-15);
        assert_eq!(r.dominance, Dominance::GStar);
        let j = r.interval_j.unwrap();
        assert!((j.lower - 0.5).abs() < 1e-15 && (j.upper - 2.0).abs() < 1e-15);
        assert!(j.contains(1.5));
        assert!(!r.roles_reversed);
        assert_eq!(r.crossover_time, None);
    }

    #[test]
    fn boundary_band_is_constant() {
        // n = aλ/b = 2
        let r = classify(&p(1.0, 1.0, 0.05, 0.05, 0.1, 2.0), TOL);
        assert_eq!(r.band, Band::Boundary);
        assert_eq!(r.behavior_g, LongRun::ConstantPositive);
        assert_eq!(r.behavior_g_star, LongRun::DivergesToInfinity);
        // n = b*/(a*λ) = 0.5, roles reversed
        let r = classify(&p(1.0, 1.0, 0.05, 0.05, 0.1, 0.5), TOL);
        assert_eq!(r.band, Band::Boundary);
        assert_eq!(r.behavior_g_star, LongRun::ConstantPositive);
        assert!(r.roles_reversed);
    }

    #[test]
    fn critical_case_uses_signs() {
        // boundaries coincide at n = 2·0.1/0.5 = 0.4
        let r = classify(&p(2.0, 0.5, 0.5, 0.02, 0.1, 3.0), TOL);
        assert_eq!(r.growth_case, GrowthCase::Critical);
        assert!(r.interval_j.is_none());
        assert_eq!(r.band, Band::High);
        assert_eq!(r.behavior_g, LongRun::DecaysToZero);
        assert_eq!(r.behavior_g_star, LongRun::DivergesToInfinity);
        let r = classify(&p(2.0, 0.5, 0.5, 0.02, 0.1, 0.4), TOL);
        assert_eq!(r.band, Band::Boundary);
        assert_eq!(r.behavior_g, LongRun::ConstantPositive);
        assert_eq!(r.behavior_g_star, LongRun::ConstantPositive);
    }

    #[test]
    fn crossover_time_for_unequal_start() {
        // g = −1/24 per unit time; B starts 2x higher, so B = B* at ln 2 · 24
        let params = p(1.0, 1.0, 0.05, 0.05, 0.1, 1.5).with_initial_wellbeing(2.0, 1.0).unwrap();
        let r = classify(&params, TOL);
        let t = r.crossover_time.unwrap();
        assert!((t - 24.0 * 2f64.ln()).abs() < 1e-12);
        // B starts lower and falls further behind: no crossover
        let params = params.with_initial_wellbeing(1.0, 2.0).unwrap();
        assert_eq!(classify(&params, TOL).crossover_time, None);
    }

    #[test]
    fn interval_j_cases() {
        let j = double_positive_interval(&p(1.0, 1.0, 0.05, 0.05, 0.1, 1.0), TOL).unwrap();
        assert!((j.lower - 0.5).abs() < 1e-15 && (j.upper - 2.0).abs() < 1e-15);
        assert!(double_positive_interval(&p(1.0, 1.0, 0.2, 0.2, 0.1, 1.0), TOL).is_none());
        assert!(double_positive_interval(&p(2.0, 0.5, 0.5, 0.02, 0.1, 1.0), TOL).is_none());
    }

    #[test]
    fn low_band_feasibility_cases() {
        for lambda in [0.01, 0.1, 1.0, 10.0] {
            assert!(!low_band_feasibility(&p(1.3, 1.3, 0.2, 0.2, lambda, 1.0), TOL).feasible);
        }
        let f = low_band_feasibility(&p(10.0, 0.1, 0.05, 0.5, 0.1, 1.0), TOL);
        assert!(f.feasible);
        assert!((f.star_ratio - 0.02).abs() < 1e-15);
        assert!((f.own_ratio - 20.0).abs() < 1e-12);
        // aλ = b exactly
        assert!(!low_band_feasibility(&p(2.0, 0.1, 0.2, 0.5, 0.1, 1.0), TOL).feasible);
    }

    #[test]
    fn bracketing_examples() {
        let c = verify_nhat_bracketing(&p(2.0, 1.0, 0.1, 0.2, 0.5, 1.0), TOL).unwrap();
        assert_eq!(c.growth_case, GrowthCase::HighGrowth);
        assert!((c.lower - 0.4).abs() < 1e-15 && (c.upper - 10.0).abs() < 1e-12);
        assert!((c.n_hat - 5.372_281_323_269_014).abs() < 1e-12);
        assert!(c.pass);

        let c = verify_nhat_bracketing(&p(1.0, 1.0, 0.2, 0.2, 0.1, 1.0), TOL).unwrap();
        assert_eq!(c.growth_case, GrowthCase::LowGrowth);
        assert!(c.pass && (c.n_hat - 1.0).abs() < 1e-15);

        assert!(matches!(
            verify_nhat_bracketing(&p(2.0, 0.5, 0.5, 0.02, 0.1, 1.0), TOL),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn display_names() {
        assert_eq!(GrowthCase::HighGrowth.to_string(), "HighGrowth");
        assert_eq!(LongRun::DecaysToZero.to_string(), "DecaysToZero");
        assert_eq!(Dominance::GStar.to_string(), "G_star");
    }
}
