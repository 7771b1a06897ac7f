//! Fixtures shared by the benchmarks.

use wellbeing::ScenarioParams;

/// The high-growth scenario with `J = ]0.5, 2[`.
pub fn high_growth() -> ScenarioParams {
    ScenarioParams::new(1.0, 1.0, 0.05, 0.05, 0.1, 1.5).expect("valid parameters")
}

/// A grid of `size × size` scenarios over `(λ, n)`, spanning both growth
/// cases and all three bands.
pub fn grid(size: usize) -> Vec<ScenarioParams> {
    let mut out = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let lambda = 0.01 + 0.29 * i as f64 / size as f64;
            let n = 0.1 + 9.9 * j as f64 / size as f64;
            out.push(ScenarioParams::new(1.0, 0.8, 0.05, 0.08, lambda, n).expect("valid parameters"));
        }
    }
    out
}
