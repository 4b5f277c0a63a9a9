use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use crate::bounds::BoundValue;
use crate::estimators::rational_to_f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum MetricValue {
    /// `num/den` plus its decimal rendering.
    Exact {
        rational: String,
        decimal: f64,
    },
    Float {
        value: f64,
    },
    Integer {
        value: i64,
    },
    Flag {
        value: bool,
    },
    Text {
        value: String,
    },
}

impl MetricValue {
    pub fn exact(r: &BigRational) -> Self {
        MetricValue::Exact {
            rational: r.to_string(),
            decimal: rational_to_f64(r),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            MetricValue::Exact { decimal, .. } => Some(decimal),
            MetricValue::Float { value } => Some(value),
            MetricValue::Integer { value } => Some(value as f64),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            MetricValue::Exact { rational, .. } => rational.clone(),
            MetricValue::Float { value } => format!("{value}"),
            MetricValue::Integer { value } => value.to_string(),
            MetricValue::Flag { value } => value.to_string(),
            MetricValue::Text { value } => value.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    #[serde(flatten)]
    pub value: MetricValue,
}

/// One point of a swept series, e.g. a tail frequency at one ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub series: String,
    /// Exact abscissa (`num/den` or an integer).
    pub x: String,
    pub x_decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_clamped: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_log10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl GridPoint {
    pub fn value(series: impl Into<String>, x: impl ToString, x_decimal: f64, value: f64) -> Self {
        GridPoint {
            series: series.into(),
            x: x.to_string(),
            x_decimal,
            hits: None,
            trials: None,
            empirical: Some(value),
            bound_raw: None,
            bound_clamped: None,
            bound_log10: None,
            sigma: None,
            vacuous: false,
            pass: None,
            margin: None,
        }
    }

    pub fn bound(series: impl Into<String>, x: &BigRational, raw: f64, log10: f64) -> Self {
        GridPoint {
            empirical: None,
            bound_raw: Some(raw),
            bound_clamped: Some(raw.min(1.0)),
            bound_log10: Some(log10),
            vacuous: raw >= 1.0,
            ..GridPoint::value(series, x, rational_to_f64(x), 0.0)
        }
    }

    /// An empirical tail frequency `hits/trials` against a bound. Passes iff
    /// the frequency is at most `min(1, bound) + 3σ` with
    /// `σ = sqrt(p(1−p)/trials)`, `p = min(1, bound)`; bounds at or above 1
    /// are flagged vacuous.
    pub fn tail_check(
        series: impl Into<String>,
        x: &BigRational,
        hits: u64,
        trials: u64,
        raw: f64,
        log10: f64,
    ) -> Self {
        let p = raw.min(1.0);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let empirical = hits as f64 / trials as f64;
        let margin = p + 3.0 * sigma - empirical;
        GridPoint {
            hits: Some(hits),
            trials: Some(trials),
            empirical: Some(empirical),
            sigma: Some(sigma),
            pass: Some(margin >= 0.0),
            margin: Some(margin),
            ..GridPoint::bound(series, x, raw, log10)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass,
            vacuous: false,
            margin: None,
            detail: detail.into(),
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn vacuous(mut self, vacuous: bool) -> Self {
        self.vacuous = vacuous;
        self
    }

    /// Display label: `pass`, `pass (vacuous)` or `FAIL`.
    pub fn label(&self) -> &'static str {
        match (self.pass, self.vacuous) {
            (true, false) => "pass",
            (true, true) => "pass (vacuous)",
            (false, _) => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub metrics: Vec<Metric>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<GridPoint>,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub artifacts: BTreeMap<String, serde_json::Value>,
    /// Not reproducible; ignored by [`RunReport::fingerprint`].
    pub wall_clock_seconds: f64,
}

pub const CSV_COLUMNS: [&str; 13] = [
    "experiment",
    "record",
    "series",
    "x",
    "value",
    "hits",
    "trials",
    "bound_raw",
    "bound_clamped",
    "sigma",
    "vacuous",
    "pass",
    "margin",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        RunReport {
            experiment: config.kind(),
            seed: config.seed(),
            config: config.clone(),
            metrics: Vec::new(),
            bounds: Vec::new(),
            grid: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            artifacts: BTreeMap::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: MetricValue) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
        });
    }

    pub fn exact(&mut self, name: impl Into<String>, r: &BigRational) {
        self.metric(name, MetricValue::exact(r));
    }

    pub fn float(&mut self, name: impl Into<String>, value: f64) {
        self.metric(name, MetricValue::Float { value });
    }

    pub fn integer(&mut self, name: impl Into<String>, value: i64) {
        self.metric(name, MetricValue::Integer { value });
    }

    pub fn get(&self, name: &str) -> Option<&MetricValue> {
        self.metrics.iter().find(|m| m.name == name).map(|m| &m.value)
    }

    /// Adds one verdict per checked grid point of `series`.
    pub fn grid_verdicts(&mut self, series: &str) {
        let new: Vec<Verdict> = self
            .grid
            .iter()
            .filter(|g| g.series == series)
            .filter_map(|g| {
                let pass = g.pass?;
                Some(
                    Verdict::new(
                        format!("{series}@{}", g.x),
                        pass,
                        format!(
                            "empirical {} vs min(1, bound) + 3σ = {}",
                            g.empirical.unwrap_or(f64::NAN),
                            g.bound_clamped.unwrap_or(f64::NAN) + 3.0 * g.sigma.unwrap_or(0.0)
                        ),
                    )
                    .with_margin(g.margin.unwrap_or(0.0))
                    .vacuous(g.vacuous),
                )
            })
            .collect();
        self.verdicts.extend(new);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// `Some(code)` when a verdict failed.
    pub fn failure_exit_code(&self) -> Option<i32> {
        (!self.passed()).then(|| self.experiment.failure_exit_code())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-clock field zeroed; equal for reruns with the same
    /// config and seed.
    pub fn fingerprint(&self) -> String {
        let mut copy = self.clone();
        copy.wall_clock_seconds = 0.0;
        copy.to_json()
    }

    /// One row per grid point, metric and verdict, with [`CSV_COLUMNS`].
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        let exp = self.experiment.name();
        for g in &self.grid {
            w.write_record([
                exp.to_string(),
                "grid".into(),
                g.series.clone(),
                g.x.clone(),
                opt(g.empirical),
                opt(g.hits),
                opt(g.trials),
                opt(g.bound_raw),
                opt(g.bound_clamped),
                opt(g.sigma),
                g.vacuous.to_string(),
                opt(g.pass),
                opt(g.margin),
            ])
            .expect("in-memory write");
        }
        for m in &self.metrics {
            let mut row = vec![
                exp.to_string(),
                "metric".into(),
                m.name.clone(),
                String::new(),
                m.value.render(),
            ];
            row.resize(CSV_COLUMNS.len(), String::new());
            w.write_record(row).expect("in-memory write");
        }
        for b in &self.bounds {
            let mut row = vec![
                exp.to_string(),
                "bound".into(),
                b.name.clone(),
                String::new(),
                b.raw.to_string(),
            ];
            row.resize(CSV_COLUMNS.len(), String::new());
            row[7] = b.raw.to_string();
            row[8] = b.clamped.to_string();
            w.write_record(row).expect("in-memory write");
        }
        for v in &self.verdicts {
            let mut row = vec![
                exp.to_string(),
                "verdict".into(),
                v.name.clone(),
                String::new(),
                v.label().into(),
            ];
            row.resize(CSV_COLUMNS.len(), String::new());
            row[10] = v.vacuous.to_string();
            row[11] = v.pass.to_string();
            row[12] = opt(v.margin);
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Two-column `x value` blocks, one per series: bounds under the series
    /// name and empirical values under `<series>:empirical`.
    pub fn to_plot_data(&self) -> String {
        let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
        for g in &self.grid {
            if let Some(b) = g.bound_raw {
                series.entry(g.series.clone()).or_default().push((g.x_decimal, b));
            }
            if let Some(e) = g.empirical {
                let name = if g.bound_raw.is_some() {
                    format!("{}:empirical", g.series)
                } else {
                    g.series.clone()
                };
                series.entry(name).or_default().push((g.x_decimal, e));
            }
        }
        let mut out = String::new();
        for (name, pts) in series {
            out.push_str(&format!("# {name}\n"));
            for (x, y) in pts {
                out.push_str(&format!("{x} {y}\n"));
            }
            out.push('\n');
        }
        out
    }
}
