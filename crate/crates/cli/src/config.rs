//! Declarative scenario configuration: a strict JSON schema (unknown keys
//! rejected, every numeric constraint checked at parse time with a
//! field-precise message) that round-trips through serialization.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scenario::known_tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    BargmannLoop,
    Covariance,
    KgReduce,
    Remnant,
    Sagnac,
    GroupLoop,
    Contract,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::BargmannLoop,
        Scenario::Covariance,
        Scenario::KgReduce,
        Scenario::Remnant,
        Scenario::Sagnac,
        Scenario::GroupLoop,
        Scenario::Contract,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::BargmannLoop => "bargmann-loop",
            Scenario::Covariance => "covariance",
            Scenario::KgReduce => "kg-reduce",
            Scenario::Remnant => "remnant",
            Scenario::Sagnac => "sagnac",
            Scenario::GroupLoop => "group-loop",
            Scenario::Contract => "contract",
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Scenario::BargmannLoop => {
                "translate-boost loop on a (multi-mass) wavepacket; extracted vs analytic phases"
            }
            Scenario::Covariance => "evolve-then-boost vs boost-then-evolve discrepancy",
            Scenario::KgReduce => "Klein-Gordon envelope vs Schrodinger evolution over a c sweep",
            Scenario::Remnant => "exact Lorentz phase vs Galilean boost phase over a c sweep",
            Scenario::Sagnac => "rotating-ring phase comparators and their limits",
            Scenario::GroupLoop => "matrix group loops: central shift and commutator checks",
            Scenario::Contract => "Poincare loop contraction onto the central shift over a c sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

fn default_unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSection {
    pub masses: Vec<f64>,
    #[serde(default = "default_unit")]
    pub hbar: f64,
    #[serde(default = "default_unit")]
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSection {
    pub v: [f64; 3],
    pub a: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub include_rest_energy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub v_signal: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_flight: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventSection {
    pub x: [f64; 3],
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "c")]
    C,
    #[serde(rename = "dt")]
    Dt,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "Omega")]
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRange {
    pub start: f64,
    pub factor: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_range: Option<LogRange>,
}

impl SweepSection {
    pub fn resolve(&self) -> Vec<f64> {
        match (&self.values, &self.log_range) {
            (Some(v), _) => v.clone(),
            (None, Some(r)) => (0..r.count)
                .map(|k| r.start * r.factor.powi(k as i32))
                .collect(),
            (None, None) => Vec::new(),
        }
    }
}

/// One scenario run: which experiment, on what grid, with what particle,
/// transform, evolution, ring, event, and sweep parameters. Sections not
/// used by the chosen scenario may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particle: Option<ParticleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<EventSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn fail(msg: impl Into<String>) -> Result<(), ConfigError> {
    Err(ConfigError(msg.into()))
}

impl ScenarioConfig {
    /// Parse and fully validate a JSON document; diagnostics carry the
    /// offending key and constraint (syntax errors carry line/column).
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(grid) = &self.grid {
            if grid.n < 8 || !grid.n.is_power_of_two() {
                return fail(format!("grid: n must be a power of two >= 8, got {}", grid.n));
            }
            if grid.length <= 0.0 || !grid.length.is_finite() {
                return fail(format!("grid: length must be > 0, got {}", grid.length));
            }
        }
        if let Some(p) = &self.particle {
            if p.masses.is_empty() {
                return fail("particle: masses must contain at least one entry");
            }
            for (i, m) in p.masses.iter().enumerate() {
                if *m <= 0.0 || !m.is_finite() {
                    return fail(format!("particle: masses[{i}] must be > 0, got {m}"));
                }
            }
            if p.hbar <= 0.0 || !p.hbar.is_finite() {
                return fail(format!("particle: hbar must be > 0, got {}", p.hbar));
            }
            if p.c <= 0.0 || !p.c.is_finite() {
                return fail(format!("particle: c must be > 0, got {}", p.c));
            }
        }
        if let Some(t) = &self.transform {
            if t.v.iter().chain(t.a.iter()).any(|x| !x.is_finite()) {
                return fail("transform: v and a components must be finite");
            }
        }
        if let Some(e) = &self.evolution {
            if e.dt <= 0.0 || !e.dt.is_finite() {
                return fail(format!("evolution: dt must be > 0, got {}", e.dt));
            }
            if e.steps == 0 {
                return fail("evolution: steps must be >= 1");
            }
        }
        if let Some(r) = &self.ring {
            if r.radius <= 0.0 || !r.radius.is_finite() {
                return fail(format!("ring: R must be > 0, got {}", r.radius));
            }
            if r.omega < 0.0 || !r.omega.is_finite() {
                return fail(format!("ring: Omega must be >= 0, got {}", r.omega));
            }
            if r.v_signal < 0.0 || !r.v_signal.is_finite() {
                return fail(format!("ring: v_signal must be >= 0, got {}", r.v_signal));
            }
            if let Some(t) = r.t_flight {
                if t <= 0.0 || !t.is_finite() {
                    return fail(format!("ring: t_flight must be > 0, got {t}"));
                }
            }
            let c = self.particle.as_ref().map(|p| p.c).unwrap_or(1.0);
            if r.omega * r.radius >= c {
                return fail("ring: Omega*R must be < c");
            }
        }
        if let Some(e) = &self.event {
            if !e.t.is_finite() || e.x.iter().any(|x| !x.is_finite()) {
                return fail("event: x and t must be finite");
            }
        }
        if let Some(s) = &self.sweep {
            match (&s.values, &s.log_range) {
                (Some(_), Some(_)) => {
                    return fail("sweep: give either values or log_range, not both")
                }
                (None, None) => return fail("sweep: values or log_range is required"),
                (Some(v), None) => {
                    if v.is_empty() {
                        return fail("sweep: values must not be empty");
                    }
                    if v.iter().any(|x| *x <= 0.0 || !x.is_finite()) {
                        return fail("sweep: values must be strictly positive");
                    }
                }
                (None, Some(r)) => {
                    if r.start <= 0.0 || !r.start.is_finite() {
                        return fail(format!("sweep: log_range.start must be > 0, got {}", r.start));
                    }
                    if r.factor <= 1.0 || !r.factor.is_finite() {
                        return fail(format!(
                            "sweep: log_range.factor must be > 1, got {}",
                            r.factor
                        ));
                    }
                    if r.count < 2 {
                        return fail("sweep: log_range.count must be >= 2");
                    }
                }
            }
        }
        if let Some(tols) = &self.tolerances {
            let known = known_tolerances(self.scenario);
            for (key, val) in tols {
                if !known.contains(&key.as_str()) {
                    return fail(format!(
                        "tolerances: unknown check \"{key}\" for scenario {} (known: {})",
                        self.scenario.name(),
                        known.join(", ")
                    ));
                }
                if *val <= 0.0 || !val.is_finite() {
                    return fail(format!("tolerances: {key} must be > 0, got {val}"));
                }
            }
        }

        // Scenario-required sections.
        let need = |present: bool, section: &str| -> Result<(), ConfigError> {
            if present {
                Ok(())
            } else {
                fail(format!(
                    "scenario {}: missing required section \"{section}\"",
                    self.scenario.name()
                ))
            }
        };
        match self.scenario {
            Scenario::BargmannLoop => {
                need(self.grid.is_some(), "grid")?;
                need(self.particle.is_some(), "particle")?;
                need(self.transform.is_some(), "transform")?;
            }
            Scenario::Covariance => {
                need(self.grid.is_some(), "grid")?;
                need(self.particle.is_some(), "particle")?;
                need(self.transform.is_some(), "transform")?;
                need(self.evolution.is_some(), "evolution")?;
            }
            Scenario::KgReduce => {
                need(self.grid.is_some(), "grid")?;
                need(self.particle.is_some(), "particle")?;
                need(self.evolution.is_some(), "evolution")?;
            }
            Scenario::Remnant => {
                need(self.particle.is_some(), "particle")?;
                need(self.transform.is_some(), "transform")?;
                need(self.event.is_some(), "event")?;
            }
            Scenario::Sagnac => {
                need(self.ring.is_some(), "ring")?;
                need(self.particle.is_some(), "particle")?;
            }
            Scenario::GroupLoop => {
                need(self.transform.is_some(), "transform")?;
                need(self.particle.is_some(), "particle")?;
            }
            Scenario::Contract => {
                need(self.transform.is_some(), "transform")?;
            }
        }
        Ok(())
    }
}
