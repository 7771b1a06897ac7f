use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use wellbeing::calibration::{fit_growth_rate, scenario_from_data, IncomeSeries, Sensitivities};
use wellbeing::model::{exponent_g, exponent_g_star, ratio_analysis, sign_quadratic};
use wellbeing::regime::{classify, growth_case, low_band_feasibility, verify_nhat_bracketing};
use wellbeing::{closed_form_b, closed_form_b_star, datasets, general_wellbeing, integrate_at, Param, Tolerance};

use crate::numfmt::num;
use crate::scenario::{Scenario, ScenarioFile};
use crate::{Failure, Mode};

fn runtime(e: wellbeing::Error) -> Failure {
    match e {
        wellbeing::Error::Integration { .. } | wellbeing::Error::QuadratureDepth { .. } => {
            Failure::Runtime(e.to_string())
        }
        _ => Failure::Input(e.to_string()),
    }
}

pub fn classify_report(scenario: &Scenario) -> String {
    let p = &scenario.params;
    let tol = scenario.epsilon;
    let r = classify(p, tol);
    let ratio = ratio_analysis(p);
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a String");
    kv("growth_case", format!("\"{}\"", r.growth_case));
    kv("lambda_squared", num(p.lambda() * p.lambda()));
    kv("growth_threshold", num(p.b() * p.b_star() / (p.a() * p.a_star())));
    kv("boundary_g", num(r.boundary_g));
    kv("boundary_g_star", num(r.boundary_g_star));
    kv("n", num(p.n()));
    kv("band", format!("\"{}\"", r.band));
    kv("roles_reversed", r.roles_reversed.to_string());
    kv("behavior_g", format!("\"{}\"", r.behavior_g));
    kv("behavior_g_star", format!("\"{}\"", r.behavior_g_star));
    kv("exponent_g", num(exponent_g(p)));
    kv("exponent_g_star", num(exponent_g_star(p)));
    kv("g_rate", num(ratio.g_rate));
    kv("f_value", num(ratio.f_value));
    kv("discriminant", num(ratio.discriminant));
    kv("n_hat", num(r.n_hat));
    match r.interval_j {
        Some(j) => kv("interval_j", format!("[{}, {}]", num(j.lower), num(j.upper))),
        None => kv("interval_j", "\"none\"".into()),
    }
    kv("dominance", format!("\"{}\"", r.dominance));
    if let Some(t) = r.crossover_time {
        kv("crossover_time", num(t));
    }
    kv("low_band_feasible", low_band_feasibility(p, tol).feasible.to_string());
    let bracketing = match verify_nhat_bracketing(p, tol) {
        Ok(c) if c.pass => "pass",
        Ok(_) => "fail",
        Err(_) => "not-applicable",
    };
    kv("nhat_bracketing", format!("\"{bracketing}\""));
    out
}

fn output_times(t0: f64, t_end: f64, interval: f64) -> Vec<f64> {
    let mut times = vec![t0];
    let mut i = 1;
    loop {
        let t = t0 + i as f64 * interval;
        if t >= t_end - 1e-9 * interval {
            break;
        }
        times.push(t);
        i += 1;
    }
    if t_end > t0 {
        times.push(t_end);
    }
    times
}

pub struct Simulation {
    pub table: String,
    pub max_deviation: Option<f64>,
}

pub fn simulate(scenario: &Scenario, t_end: f64, mode: Mode) -> Result<Simulation, Failure> {
    let p = &scenario.params;
    if !(t_end.is_finite() && t_end >= p.t0()) {
        return Err(Failure::Input(format!("--t-end {t_end} must be at or after t0 = {}", p.t0())));
    }
    scenario.income_g.validate_horizon(p.t0(), t_end, "p").map_err(runtime)?;
    scenario.income_g_star.validate_horizon(p.t0(), t_end, "q").map_err(runtime)?;
    let times = output_times(p.t0(), t_end, scenario.sample_interval);

    let closed = || -> Result<Vec<(f64, f64)>, Failure> {
        times
            .iter()
            .map(|&t| {
                if scenario.income_g.is_exponential() {
                    Ok((closed_form_b(p, t).map_err(runtime)?, closed_form_b_star(p, t).map_err(runtime)?))
                } else {
                    let (g, gs) = (&scenario.income_g, &scenario.income_g_star);
                    let tol = scenario.quad_tolerance;
                    Ok((
                        general_wellbeing(g, gs, p.group_g(), p.t0(), t, tol).map_err(runtime)?,
                        general_wellbeing(gs, g, p.group_g_star(), p.t0(), t, tol).map_err(runtime)?,
                    ))
                }
            })
            .collect()
    };
    let ode = || -> Result<Vec<(f64, f64)>, Failure> {
        let traj = integrate_at(&scenario.income_g, &scenario.income_g_star, p, &times, scenario.control)
            .map_err(runtime)?;
        Ok(traj.samples.iter().map(|s| (s.b, s.b_star)).collect())
    };

    let mut table = String::from("t,B,B_star,p,q");
    let (primary, secondary) = match mode {
        Mode::Closed => (closed()?, None),
        Mode::Ode => (ode()?, None),
        Mode::Both => {
            table.push_str(",B_ode,B_star_ode");
            (closed()?, Some(ode()?))
        }
    };
    table.push('\n');
    let mut max_deviation = secondary.as_ref().map(|_| 0.0f64);
    for (i, &t) in times.iter().enumerate() {
        let (b, b_star) = primary[i];
        write!(
            table,
            "{},{},{},{},{}",
            num(t),
            num(b),
            num(b_star),
            num(scenario.income_g.value(t)),
            num(scenario.income_g_star.value(t))
        )
        .expect("writing to a String");
        if let Some(ode) = &secondary {
            let (bo, bso) = ode[i];
            write!(table, ",{},{}", num(bo), num(bso)).expect("writing to a String");
            let dev = ((bo - b) / b).abs().max(((bso - b_star) / b_star).abs());
            max_deviation = max_deviation.map(|m| m.max(dev));
        }
        table.push('\n');
    }
    Ok(Simulation { table, max_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for SweepSpec {
    type Err = String;

    /// `NAME=START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=START:STOP:STEP, got `{s}`"))?;
        let param = Param::from_str(name.trim()).map_err(|e| e.to_string())?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:STEP, got `{range}`"));
        }
        let mut nums = [0.0f64; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| format!("bad number `{part}`"))?;
        }
        let [start, stop, step] = nums;
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(format!("sweep needs START < STOP, got {start}:{stop}"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(format!("sweep STEP must be positive, got {step}"));
        }
        Ok(Self { param, start, stop, step })
    }
}

impl SweepSpec {
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

pub fn sweep(scenario: &Scenario, spec: &SweepSpec, tol: Tolerance) -> String {
    let rows: Vec<Result<String, String>> = spec
        .grid()
        .par_iter()
        .map(|&value| {
            let p = scenario.params.with(spec.param, value).map_err(|e| e.to_string())?;
            let r = classify(&p, tol);
            Ok(format!(
                "{},{},{},{},{},{},{},{},{}",
                num(value),
                growth_case(&p, tol),
                num(exponent_g(&p)),
                num(exponent_g_star(&p)),
                num(sign_quadratic(&p, p.n())),
                num(r.n_hat),
                r.band,
                r.behavior_g,
                r.behavior_g_star
            ))
        })
        .collect();

    let mut out = format!(
        "{},growth_case,exponent_g,exponent_g_star,f_n,n_hat,band,behavior_g,behavior_g_star\n",
        spec.param
    );
    let mut skipped = Vec::new();
    for (value, row) in spec.grid().into_iter().zip(rows) {
        match row {
            Ok(line) => {
                out.push_str(&line);
                out.push('\n');
            }
            Err(reason) => {
                eprintln!("warning: skipping {}={}: {reason}", spec.param, num(value));
                skipped.push(format!("# skipped {}={}: {reason}\n", spec.param, num(value)));
            }
        }
    }
    for line in skipped {
        out.push_str(&line);
    }
    out
}

pub struct CalibrationRequest<'a> {
    pub series: &'a IncomeSeries,
    pub scenario_out: Option<&'a Path>,
    pub n: Option<f64>,
    pub sensitivities: Sensitivities,
}

pub fn calibrate(req: &CalibrationRequest<'_>) -> Result<String, Failure> {
    let fit = fit_growth_rate(req.series);
    let mut out = String::new();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("writing to a String");
    kv("points", req.series.len().to_string());
    kv("t_ref", num(fit.t_ref));
    kv("lambda", num(fit.lambda));
    kv("p0", num(fit.p0));
    kv("residual_rms", num(fit.residual_rms));

    if let Some(path) = req.scenario_out {
        let n = req
            .n
            .ok_or_else(|| Failure::Input("--scenario-out needs --n".into()))?;
        let params = scenario_from_data(&fit, n, req.sensitivities)
            .map_err(|e| Failure::Input(format!("scenario assembly refused: {e}")))?;
        let file = ScenarioFile {
            a: params.a(),
            a_star: params.a_star(),
            b: params.b(),
            b_star: params.b_star(),
            lambda: params.lambda(),
            n: params.n(),
            b0: params.b0(),
            b0_star: params.b0_star(),
            p0: params.p0(),
            t0: params.t0(),
            income_model: None,
            numerics: None,
        };
        let text = toml::to_string(&file).map_err(|e| Failure::Runtime(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
        kv("scenario", format!("{:?}", path.display().to_string()));
    }
    Ok(out)
}

pub fn load_series(path: Option<&Path>, dataset: Option<&str>) -> Result<IncomeSeries, Failure> {
    let text = match (path, dataset) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read series {}: {e}", path.display())))?,
        (None, Some(name)) => datasets::bundled(name)
            .filter(|_| name == "chile_gdp_percapita")
            .ok_or_else(|| Failure::Input(format!("`{name}` is not a bundled income series")))?
            .to_string(),
        _ => return Err(Failure::Input("give exactly one of --series or --dataset".into())),
    };
    IncomeSeries::parse(&text).map_err(|e| Failure::Input(format!("bad series: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HIGH: &str = "a = 1.0\na_star = 1.0\nb = 0.05\nb_star = 0.05\nlambda = 0.1\nn = 1.5\n";

    #[test]
    fn report_for_high_growth() {
        let report = classify_report(&Scenario::parse(HIGH).unwrap());
        assert!(report.contains("growth_case = \"HighGrowth\"\n"));
        assert!(report.contains("behavior_g = \"DivergesToInfinity\"\n"));
        assert!(report.contains("behavior_g_star = \"DivergesToInfinity\"\n"));
        assert!(report.contains("interval_j = [0.5, 2]\n"));
        assert!(report.contains("dominance = \"G_star\"\n"));
        assert!(report.contains("n_hat = 1\n"));
        // the report is a valid TOML document
        let parsed: toml::Table = toml::from_str(&report).unwrap();
        assert_eq!(parsed["band"].as_str(), Some("Medium"));
    }

    #[test]
    fn output_grid() {
        assert_eq!(output_times(0.0, 0.0, 1.0), [0.0]);
        assert_eq!(output_times(0.0, 2.5, 1.0), [0.0, 1.0, 2.0, 2.5]);
        assert_eq!(output_times(1.0, 3.0, 1.0), [1.0, 2.0, 3.0]);
    }

    #[test]
    fn sweep_spec_parsing() {
        let s: SweepSpec = "n=0.1:10:0.1".parse().unwrap();
        assert_eq!(s.param, Param::N);
        assert_eq!(s.grid().len(), 100);
        assert_eq!("lambda=0.5:0.7:1".parse::<SweepSpec>().unwrap().grid(), [0.5]);
        assert!("n=1:0.5:0.1".parse::<SweepSpec>().is_err());
        assert!("n=0:1:0".parse::<SweepSpec>().is_err());
        assert!("x=0:1:0.1".parse::<SweepSpec>().is_err());
        assert!("n=0:1".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn sweep_bands_transition_at_boundaries() {
        let scenario = Scenario::parse(HIGH).unwrap();
        let table = sweep(&scenario, &"n=0.1:10:0.1".parse().unwrap(), Tolerance::DEFAULT);
        let bands: Vec<(f64, String)> = table
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[0].parse().unwrap(), f[6].to_string())
            })
            .collect();
        for (n, band) in &bands {
            let expected = if (n - 0.5).abs() < 1e-9 || (n - 2.0).abs() < 1e-9 {
                "Boundary"
            } else if *n < 0.5 {
                "Low"
            } else if *n < 2.0 {
                "Medium"
            } else {
                "High"
            };
            assert_eq!(band, expected, "n = {n}");
        }
    }

    #[test]
    fn sweep_skips_invalid_points() {
        let scenario = Scenario::parse(HIGH).unwrap();
        let table = sweep(&scenario, &"b=-0.1:0.1:0.1".parse().unwrap(), Tolerance::DEFAULT);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.1,"));
        assert!(lines[2].starts_with("# skipped b=-0.1"));
        assert!(lines[3].starts_with("# skipped b=0"));
    }

    #[test]
    fn simulate_initial_row_only() {
        let scenario = Scenario::parse(HIGH).unwrap();
        let sim = simulate(&scenario, 0.0, Mode::Both).unwrap();
        assert_eq!(sim.table, "t,B,B_star,p,q,B_ode,B_star_ode\n0,1,1,1,1.5,1,1\n");
        assert_eq!(sim.max_deviation, Some(0.0));
    }
}
