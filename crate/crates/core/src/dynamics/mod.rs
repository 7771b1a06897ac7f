//! Numerical path: ODE integration of the well-being equations for arbitrary
//! incomes, plus the quadrature used by the general closed form.

pub mod income;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::model::{closed_form_b, closed_form_b_star, ScenarioParams};

use self::income::IncomeModel;

/// Default fixed step, in time units.
pub const DEFAULT_STEP: f64 = 0.01;
/// Default relative tolerance of the adaptive integrator.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    /// Classic fourth-order Runge–Kutta. The step is shrunk slightly so
    /// that every target time is hit exactly.
    Fixed { step: f64 },
    /// Dormand–Prince 5(4) with relative error control.
    Adaptive {
        tolerance: f64,
        initial_step: f64,
        min_step: f64,
    },
}

impl StepControl {
    pub fn fixed(step: f64) -> Self {
        Self::Fixed { step }
    }

    pub fn adaptive(tolerance: f64) -> Self {
        Self::Adaptive {
            tolerance,
            initial_step: 1e-2,
            min_step: 1e-12,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Fixed { step } => step.is_finite() && step > 0.0,
            Self::Adaptive {
                tolerance,
                initial_step,
                min_step,
            } => [tolerance, initial_step, min_step]
                .iter()
                .all(|v| v.is_finite() && *v > 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid step control {self:?}")))
        }
    }
}

impl Default for StepControl {
    fn default() -> Self {
        Self::fixed(DEFAULT_STEP)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub b: f64,
    pub b_star: f64,
    pub p: f64,
    pub q: f64,
}

/// Time-ordered samples of one solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub control: StepControl,
    /// Accepted integrator steps.
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory holds the initial sample")
    }
}

type State = [f64; 2];

struct System<'a> {
    p: &'a IncomeModel,
    q: &'a IncomeModel,
    a: f64,
    a_star: f64,
    b: f64,
    b_star: f64,
}

impl System<'_> {
    fn rhs(&self, t: f64, y: &State) -> std::result::Result<State, String> {
        let p = self.p.value(t);
        let q = self.q.value(t);
        for (which, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{which} income is not positive at t = {t} (value {v})"));
            }
        }
        let rate = self.a * self.p.derivative(t) / p - self.b * q / p;
        let rate_star = self.a_star * self.q.derivative(t) / q - self.b_star * p / q;
        Ok([rate * y[0], rate_star * y[1]])
    }

    fn rk4(&self, t: f64, y: &State, h: f64) -> std::result::Result<State, String> {
        let k1 = self.rhs(t, y)?;
        let k2 = self.rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &[&k1], &[1.0]))?;
        let k3 = self.rhs(t + 0.5 * h, &axpy(y, 0.5 * h, &[&k2], &[1.0]))?;
        let k4 = self.rhs(t + h, &axpy(y, h, &[&k3], &[1.0]))?;
        Ok(axpy(y, h / 6.0, &[&k1, &k2, &k3, &k4], &[1.0, 2.0, 2.0, 1.0]))
    }

    /// One Dormand–Prince step; returns the fifth-order solution and the
    /// embedded error estimate.
    fn dopri(&self, t: f64, y: &State, h: f64) -> std::result::Result<(State, State), String> {
        const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
        const A2: [f64; 1] = [1.0 / 5.0];
        const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
        const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
        const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
        const A6: [f64; 5] = [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
        ];
        const B5: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
        // fifth minus fourth order weights (7 stages, last one FSAL)
        const E: [f64; 7] = [
            71.0 / 57600.0,
            0.0,
            -71.0 / 16695.0,
            71.0 / 1920.0,
            -17253.0 / 339200.0,
            22.0 / 525.0,
            -1.0 / 40.0,
        ];

        let k1 = self.rhs(t, y)?;
        let k2 = self.rhs(t + C[0] * h, &axpy(y, h, &[&k1], &A2))?;
        let k3 = self.rhs(t + C[1] * h, &axpy(y, h, &[&k1, &k2], &A3))?;
        let k4 = self.rhs(t + C[2] * h, &axpy(y, h, &[&k1, &k2, &k3], &A4))?;
        let k5 = self.rhs(t + C[3] * h, &axpy(y, h, &[&k1, &k2, &k3, &k4], &A5))?;
        let k6 = self.rhs(t + C[4] * h, &axpy(y, h, &[&k1, &k2, &k3, &k4, &k5], &A6))?;
        let y_new = axpy(y, h, &[&k1, &k2, &k3, &k4, &k5, &k6], &B5);
        let k7 = self.rhs(t + C[5] * h, &y_new)?;
        let err = axpy(&[0.0, 0.0], h, &[&k1, &k2, &k3, &k4, &k5, &k6, &k7], &E);
        Ok((y_new, err))
    }
}

/// `y + h·Σ wᵢ·kᵢ`
fn axpy(y: &State, h: f64, ks: &[&State], weights: &[f64]) -> State {
    let mut out = *y;
    for (k, w) in ks.iter().zip(weights) {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

struct Solver<'a> {
    system: System<'a>,
    control: StepControl,
    t: f64,
    y: State,
    /// current adaptive step proposal
    h: f64,
    steps: usize,
}

impl Solver<'_> {
    fn sample(&self) -> Sample {
        Sample {
            t: self.t,
            b: self.y[0],
            b_star: self.y[1],
            p: self.system.p.value(self.t),
            q: self.system.q.value(self.t),
        }
    }

    fn fail(&self, reason: String) -> Error {
        Error::Integration {
            last_time: self.t,
            last_b: self.y[0],
            last_b_star: self.y[1],
            reason,
        }
    }

    fn accept(&mut self, t: f64, y: State) -> Result<()> {
        if !(y[0].is_finite() && y[1].is_finite() && y[0] > 0.0 && y[1] > 0.0) {
            return Err(self.fail(format!("well-being left the positive finite range at t = {t}")));
        }
        self.t = t;
        self.y = y;
        self.steps += 1;
        Ok(())
    }

    /// Advances to `target` exactly, calling `on_step` after every accepted step.
    fn advance_to(&mut self, target: f64, on_step: &mut dyn FnMut(Sample)) -> Result<()> {
        match self.control {
            StepControl::Fixed { step } => {
                let span = target - self.t;
                if span <= 0.0 {
                    return Ok(());
                }
                let count = ((span / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let h = span / count as f64;
                let start = self.t;
                for i in 1..=count {
                    let y = self.system.rk4(self.t, &self.y, h).map_err(|r| self.fail(r))?;
                    let t = if i == count { target } else { start + i as f64 * h };
                    self.accept(t, y)?;
                    on_step(self.sample());
                }
                Ok(())
            }
            StepControl::Adaptive {
                tolerance, min_step, ..
            } => {
                while self.t < target {
                    let remaining = target - self.t;
                    let last = self.h >= remaining;
                    let h = if last { remaining } else { self.h };
                    let (y, err) = self.system.dopri(self.t, &self.y, h).map_err(|r| self.fail(r))?;
                    let norm = (0..2)
                        .map(|i| err[i].abs() / (tolerance * self.y[i].abs().max(y[i].abs())))
                        .fold(0.0, f64::max);
                    let factor = if !norm.is_finite() {
                        0.2
                    } else if norm == 0.0 {
                        5.0
                    } else {
                        (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if norm <= 1.0 {
                        let t = if last { target } else { self.t + h };
                        self.accept(t, y)?;
                        on_step(self.sample());
                        // keep the proposal from collapsing after a clipped final step
                        if !last {
                            self.h = h * factor;
                        }
                    } else {
                        self.h = h * factor;
                    }
                    if self.h < min_step * self.t.abs().max(1.0) {
                        return Err(self.fail(format!("step size underflow (h = {})", self.h)));
                    }
                }
                Ok(())
            }
        }
    }
}

fn solver<'a>(
    p: &'a IncomeModel,
    q: &'a IncomeModel,
    params: &ScenarioParams,
    t_end: f64,
    control: StepControl,
) -> Result<Solver<'a>> {
    control.validate()?;
    let t0 = params.t0();
    if t_end.is_nan() || t_end < t0 {
        return Err(Error::BeforeStart { t: t_end, t0 });
    }
    p.validate_horizon(t0, t_end, "p")?;
    q.validate_horizon(t0, t_end, "q")?;
    let h = match control {
        StepControl::Fixed { step } => step,
        StepControl::Adaptive { initial_step, .. } => initial_step,
    };
    Ok(Solver {
        system: System {
            p,
            q,
            a: params.a(),
            a_star: params.a_star(),
            b: params.b(),
            b_star: params.b_star(),
        },
        control,
        t: t0,
        y: [params.b0(), params.b0_star()],
        h,
        steps: 0,
    })
}

/// Integrates `dB/dt = (a·p'/p − b·q/p)·B` and its starred twin from the
/// scenario's `t0` to `t_end`, recording every accepted step.
///
/// The sensitivities and initial levels come from `params`; the incomes come
/// from `p` and `q` (the scenario's `n`, `p0` and `λ` are not consulted).
pub fn integrate(
    p: &IncomeModel,
    q: &IncomeModel,
    params: &ScenarioParams,
    t_end: f64,
    control: StepControl,
) -> Result<Trajectory> {
    let mut s = solver(p, q, params, t_end, control)?;
    let mut samples = vec![s.sample()];
    s.advance_to(t_end, &mut |x| samples.push(x))?;
    Ok(Trajectory {
        samples,
        control,
        steps: s.steps,
    })
}

/// Like [`integrate`], but records only at the given output times, which
/// must be non-decreasing and start at or after `t0`.
pub fn integrate_at(
    p: &IncomeModel,
    q: &IncomeModel,
    params: &ScenarioParams,
    times: &[f64],
    control: StepControl,
) -> Result<Trajectory> {
    let t_end = times.last().copied().unwrap_or(params.t0());
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("output times must be non-decreasing".into()));
    }
    if let Some(&first) = times.first() {
        if first.is_nan() || first < params.t0() {
            return Err(Error::BeforeStart { t: first, t0: params.t0() });
        }
    }
    let mut s = solver(p, q, params, t_end, control)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        s.advance_to(t, &mut |_| {})?;
        samples.push(s.sample());
    }
    Ok(Trajectory {
        samples,
        control,
        steps: s.steps,
    })
}

/// Integrates the exponential scenario over `horizon` and returns the worst
/// relative deviation of `B` and `B*` from the closed forms across all steps.
pub fn cross_validate(params: &ScenarioParams, horizon: f64, control: StepControl) -> Result<f64> {
    let p = params.income_g();
    let q = params.income_g_star();
    let traj = integrate(&p, &q, params, params.t0() + horizon, control)?;
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let b = closed_form_b(params, s.t)?;
        let b_star = closed_form_b_star(params, s.t)?;
        worst = worst
            .max(((s.b - b) / b).abs())
            .max(((s.b_star - b_star) / b_star).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn high_growth() -> ScenarioParams {
        ScenarioParams::new(1.0, 1.0, 0.05, 0.05, 0.1, 1.5).unwrap()
    }

    #[test]
    fn rk4_matches_closed_form() {
        let params = high_growth();
        let traj = integrate(&params.income_g(), &params.income_g_star(), &params, 10.0, StepControl::default())
            .unwrap();
        let last = traj.last();
        assert_eq!(last.t, 10.0);
        assert_eq!(traj.steps, 1000);
        assert_relative_eq!(last.b, closed_form_b(&params, 10.0).unwrap(), max_relative = 1e-6);
        assert_relative_eq!(last.b_star, closed_form_b_star(&params, 10.0).unwrap(), max_relative = 1e-6);
    }

    #[test]
    fn adaptive_matches_closed_form() {
        let params = ScenarioParams::new(2.0, 0.5, 0.3, 0.1, 0.4, 3.0).unwrap();
        let traj = integrate(
            &params.income_g(),
            &params.income_g_star(),
            &params,
            30.0,
            StepControl::adaptive(1e-10),
        )
        .unwrap();
        let last = traj.last();
        assert_eq!(last.t, 30.0);
        assert_relative_eq!(last.b, closed_form_b(&params, 30.0).unwrap(), max_relative = 1e-7);
        assert_relative_eq!(last.b_star, closed_form_b_star(&params, 30.0).unwrap(), max_relative = 1e-7);
        // a constant-rate problem needs few adaptive steps
        assert!(traj.steps < 1000, "{} steps", traj.steps);
    }

    #[test]
    fn zero_rhs_keeps_levels() {
        // b = b* vanish and incomes are constant; b must stay positive so use
        // a negligible value
        let params = ScenarioParams::new(1.0, 1.0, 1e-300, 1e-300, 0.1, 2.0)
            .unwrap()
            .with_initial_wellbeing(2.0, 3.0)
            .unwrap();
        let flat = IncomeModel::exponential(1.0, 0.0, 0.0).unwrap();
        let traj = integrate(&flat, &flat.scaled(2.0).unwrap(), &params, 5.0, StepControl::default()).unwrap();
        for s in &traj.samples {
            assert_eq!((s.b, s.b_star), (2.0, 3.0));
        }
    }

    #[test]
    fn linear_income_analytic() {
        let params = ScenarioParams::new(1.0, 1.0, 0.05, 0.05, 0.1, 1.5).unwrap();
        let p = IncomeModel::linear(1.0, 1.0, 0.0).unwrap();
        let q = p.scaled(1.5).unwrap();
        let traj = integrate(&p, &q, &params, 10.0, StepControl::default()).unwrap();
        for s in traj.samples.iter().step_by(97) {
            let exact = (1.0 + s.t) * (-0.05 * 1.5 * s.t).exp();
            assert_relative_eq!(s.b, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn integrate_at_hits_requested_times() {
        let params = high_growth().with_start_time(3.0).unwrap();
        let times = [3.0, 3.3, 7.0, 7.0, 13.0];
        let traj = integrate_at(
            &params.income_g(),
            &params.income_g_star(),
            &params,
            &times,
            StepControl::default(),
        )
        .unwrap();
        let got: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
        assert_eq!(got, times);
        assert_eq!(traj.samples[0].b, 1.0);
        assert!(integrate_at(&params.income_g(), &params.income_g_star(), &params, &[5.0, 4.0], StepControl::default())
            .is_err());
        assert!(integrate_at(&params.income_g(), &params.income_g_star(), &params, &[2.0], StepControl::default())
            .is_err());
    }

    #[test]
    fn non_positive_income_aborts() {
        let params = high_growth();
        let p = IncomeModel::linear(1.0, -0.2, 0.0).unwrap();
        let err = integrate(&p, &p.scaled(2.0).unwrap(), &params, 10.0, StepControl::default()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveIncome { which: "p", .. }), "{err:?}");
    }

    #[test]
    fn step_underflow_reports_last_state() {
        // the error control wants steps far below the allowed minimum
        let params = ScenarioParams::new(5.0, 5.0, 0.05, 0.05, 0.5, 1.5).unwrap();
        let control = StepControl::Adaptive {
            tolerance: 1e-14,
            initial_step: 1.0,
            min_step: 0.5,
        };
        match integrate(&params.income_g(), &params.income_g_star(), &params, 5.0, control).unwrap_err() {
            Error::Integration { last_time, last_b, reason, .. } => {
                assert_eq!((last_time, last_b), (0.0, 1.0));
                assert!(reason.contains("underflow"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_control_and_horizon() {
        let params = high_growth();
        let (p, q) = (params.income_g(), params.income_g_star());
        assert!(integrate(&p, &q, &params, 1.0, StepControl::fixed(0.0)).is_err());
        assert!(integrate(&p, &q, &params, 1.0, StepControl::adaptive(-1.0)).is_err());
        assert!(integrate(&p, &q, &params, -1.0, StepControl::default()).is_err());
        let single = integrate(&p, &q, &params, 0.0, StepControl::default()).unwrap();
        assert_eq!(single.samples.len(), 1);
    }

    #[test]
    fn cross_validation_zero_horizon() {
        assert_eq!(cross_validate(&high_growth(), 0.0, StepControl::default()).unwrap(), 0.0);
    }

    #[test]
    fn discrete_update_agrees_to_first_order() {
        // ΔB = (a·Δp/p − b·Δt·q/p)·B converges to the ODE as Δt → 0 with
        // error O(Δt)
        let params = high_growth();
        let p = params.income_g();
        let horizon = 10.0;
        let exact = closed_form_b(&params, horizon).unwrap();
        let error_for = |dt: f64| {
            let steps = (horizon / dt).round() as usize;
            let mut b = params.b0();
            for k in 0..steps {
                let t = k as f64 * dt;
                let (pt, pn) = (p.value(t), p.value(t + dt));
                b *= 1.0 + params.a() * (pn - pt) / pt - params.b() * dt * params.n();
            }
            ((b - exact) / exact).abs()
        };
        let (e1, e2) = (error_for(0.01), error_for(0.005));
        assert!(e1 < 1e-3);
        let ratio = e1 / e2;
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }
}
