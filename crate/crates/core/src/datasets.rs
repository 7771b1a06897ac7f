//! Bundled sample datasets for Chile.

use crate::calibration::{IncomeSeries, Indicator, InequalityRecord, InequalitySummary};
use crate::error::{Error, Result};

pub const CHILE_GDP_PERCAPITA: &str = include_str!("../data/chile_gdp_percapita.txt");
pub const CHILE_INEQUALITY: &str = include_str!("../data/chile_inequality.csv");
pub const CHILE_DECADE_GROWTH: &str = include_str!("../data/chile_decade_growth.csv");

/// Published 2019 projection of Chile's GDP per capita; not part of the
/// fitted series.
pub const CHILE_GDP_2019_PROJECTION: f64 = 21190.0;

/// Names accepted by [`bundled`].
pub const NAMES: [&str; 3] = ["chile_gdp_percapita", "chile_inequality", "chile_decade_growth"];

/// Raw text of a bundled dataset.
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "chile_gdp_percapita" => Some(CHILE_GDP_PERCAPITA),
        "chile_inequality" => Some(CHILE_INEQUALITY),
        "chile_decade_growth" => Some(CHILE_DECADE_GROWTH),
        _ => None,
    }
}

pub fn chile_gdp_percapita() -> IncomeSeries {
    IncomeSeries::parse(CHILE_GDP_PERCAPITA).expect("bundled series is valid")
}

/// A published summary over a period, kept as printed rather than derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSummary {
    pub from: i32,
    pub to: i32,
    pub summary: InequalitySummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityDataset {
    pub records: Vec<InequalityRecord>,
    pub summaries: Vec<PeriodSummary>,
}

impl InequalityDataset {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = InequalityDataset {
            records: Vec::new(),
            summaries: Vec::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number `{s}`")));
            let year = |s: &str| s.parse::<i32>().map_err(|_| err(format!("bad year `{s}`")));
            match (f[0], f.len()) {
                ("record", 4) => {
                    let rec = InequalityRecord::new(f[1].parse()?, year(f[2])?, num(f[3])?)
                        .map_err(|e| err(e.to_string()))?;
                    out.records.push(rec);
                }
                ("summary", 7) => out.summaries.push(PeriodSummary {
                    from: year(f[2])?,
                    to: year(f[3])?,
                    summary: InequalitySummary {
                        indicator: f[1].parse()?,
                        mean: num(f[4])?,
                        min: num(f[5])?,
                        max: num(f[6])?,
                    },
                }),
                _ => return Err(err(format!("unrecognized row `{line}`"))),
            }
        }
        Ok(out)
    }

    pub fn summary(&self, indicator: Indicator) -> Option<&PeriodSummary> {
        self.summaries.iter().find(|s| s.summary.indicator == indicator)
    }
}

pub fn chile_inequality() -> InequalityDataset {
    InequalityDataset::parse(CHILE_INEQUALITY).expect("bundled dataset is valid")
}

/// Average growth over one decade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecadeGrowth {
    pub from: i32,
    pub to: i32,
    /// Percent per year.
    pub rate_percent: f64,
}

impl DecadeGrowth {
    /// Continuous rate equivalent to the compound annual percentage.
    pub fn continuous_rate(&self) -> f64 {
        (1.0 + self.rate_percent / 100.0).ln()
    }
}

pub fn chile_decade_growth() -> Vec<DecadeGrowth> {
    CHILE_DECADE_GROWTH
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            DecadeGrowth {
                from: f[0].parse().expect("bundled year"),
                to: f[1].parse().expect("bundled year"),
                rate_percent: f[2].parse().expect("bundled rate"),
            }
        })
        .collect()
}
