//! Report assembly: named scalars, pass/fail checks, sweep tables, and
//! log-log slope fits, with deterministic CSV/JSON emission.
//!
//! Serialization is byte-stable: keys are kept in `BTreeMap`s, sweep rows are
//! sorted by the parameter value, and every float is printed with 17
//! significant digits.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Map an angle to the principal branch (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Ordinary least squares fit of `ln y` against `ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual_rms: f64,
}

/// Fit `y = C * x^p` through `(x, y)` samples; returns the exponent `p` as
/// `slope`. All samples must be strictly positive.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit);
    }
    if xs.iter().chain(ys.iter()).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::DegenerateFit);
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(SlopeFit {
        slope,
        intercept,
        residual_rms: (ss_res / n).sqrt(),
    })
}

/// One tolerance check: `pass` iff `observed <= tolerance`, where `observed`
/// is the deviation metric the check measures (an absolute difference, a
/// residual norm, a slope distance from its target band center, ...).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub tolerance: f64,
    pub observed: f64,
}

impl Check {
    pub fn against(observed: f64, tolerance: f64) -> Self {
        Check {
            pass: observed.is_finite() && observed <= tolerance,
            tolerance,
            observed,
        }
    }
}

/// Sweep results: one row per parameter value, columns named once.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: String,
    pub columns: Vec<String>,
    /// (parameter value, metric values following `columns` order)
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl SweepTable {
    pub fn new(parameter: &str, columns: &[&str]) -> Self {
        SweepTable {
            parameter: parameter.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, param: f64, metrics: Vec<f64>) {
        debug_assert_eq!(metrics.len(), self.columns.len());
        self.rows.push((param, metrics));
    }

    fn sorted_rows(&self) -> Vec<&(f64, Vec<f64>)> {
        let mut rows: Vec<&(f64, Vec<f64>)> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows
    }
}

/// Scenario outputs: named scalars, checks against declared tolerances,
/// fitted slopes, and an optional sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport {
    pub scenario: String,
    pub scalars: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, Check>,
    pub slopes: BTreeMap<String, SlopeFit>,
    pub sweep: Option<SweepTable>,
}

impl PhaseReport {
    pub fn new(scenario: &str) -> Self {
        PhaseReport {
            scenario: scenario.to_string(),
            scalars: BTreeMap::new(),
            checks: BTreeMap::new(),
            slopes: BTreeMap::new(),
            sweep: None,
        }
    }

    pub fn scalar(&mut self, name: &str, value: f64) -> &mut Self {
        self.scalars.insert(name.to_string(), value);
        self
    }

    pub fn check(&mut self, name: &str, observed: f64, tolerance: f64) -> &mut Self {
        self.checks
            .insert(name.to_string(), Check::against(observed, tolerance));
        self
    }

    pub fn slope(&mut self, name: &str, fit: SlopeFit) -> &mut Self {
        self.slopes.insert(name.to_string(), fit);
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    /// JSON document mirroring the report, with stable key order and fixed
    /// float formatting.
    pub fn to_json_string(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str("{\n");
        out.push_str(&format!("  \"scenario\": \"{}\",\n", escape(&self.scenario)));
        out.push_str("  \"scalars\": {");
        push_map(&mut out, self.scalars.iter().map(|(k, v)| (k, fmt_float(*v))));
        out.push_str("},\n  \"checks\": {");
        push_map(
            &mut out,
            self.checks.iter().map(|(k, c)| {
                (
                    k,
                    format!(
                        "{{\"pass\": {}, \"tolerance\": {}, \"observed\": {}}}",
                        c.pass,
                        fmt_float(c.tolerance),
                        fmt_float(c.observed)
                    ),
                )
            }),
        );
        out.push_str("},\n  \"slopes\": {");
        push_map(
            &mut out,
            self.slopes.iter().map(|(k, s)| {
                (
                    k,
                    format!(
                        "{{\"slope\": {}, \"intercept\": {}, \"residual_rms\": {}}}",
                        fmt_float(s.slope),
                        fmt_float(s.intercept),
                        fmt_float(s.residual_rms)
                    ),
                )
            }),
        );
        out.push_str("},\n  \"sweep\": ");
        match &self.sweep {
            None => out.push_str("null"),
            Some(table) => {
                out.push_str(&format!(
                    "{{\n    \"parameter\": \"{}\",\n    \"columns\": [",
                    escape(&table.parameter)
                ));
                let cols: Vec<String> = table
                    .columns
                    .iter()
                    .map(|c| format!("\"{}\"", escape(c)))
                    .collect();
                out.push_str(&cols.join(", "));
                out.push_str("],\n    \"rows\": [");
                let rows: Vec<String> = table
                    .sorted_rows()
                    .iter()
                    .map(|(p, ms)| {
                        let mut cells = vec![fmt_float(*p)];
                        cells.extend(ms.iter().map(|m| fmt_float(*m)));
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                out.push_str(&rows.join(", "));
                out.push_str("]\n  }");
            }
        }
        out.push_str(&format!(
            ",\n  \"all_pass\": {}\n}}\n",
            self.all_pass()
        ));
        out
    }

    /// CSV emission. A report with a sweep table emits `param,<metrics...>`
    /// rows sorted by parameter; otherwise the scalars are emitted as
    /// `key,value` pairs.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        match &self.sweep {
            Some(table) => {
                out.push_str(&table.parameter);
                for c in &table.columns {
                    out.push(',');
                    out.push_str(c);
                }
                out.push('\n');
                for (p, ms) in table.sorted_rows() {
                    out.push_str(&fmt_float(*p));
                    for m in ms {
                        out.push(',');
                        out.push_str(&fmt_float(*m));
                    }
                    out.push('\n');
                }
            }
            None => {
                out.push_str("key,value\n");
                for (k, v) in &self.scalars {
                    out.push_str(&format!("{},{}\n", k, fmt_float(*v)));
                }
            }
        }
        out
    }
}

/// Fixed 17-significant-digit float formatting used by every emitter.
pub fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn push_map<'a, I: Iterator<Item = (&'a String, String)>>(out: &mut String, entries: I) {
    let parts: Vec<String> = entries
        .map(|(k, v)| format!("\"{}\": {}", escape(k), v))
        .collect();
    out.push_str(&parts.join(", "));
}
