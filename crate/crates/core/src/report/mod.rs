//! Run configuration and the structured report shared by the CLI commands.
//!
//! Numbers are written with 17 significant digits so a report round-trips
//! every `f64` exactly; non-finite values become `null`.

mod bounds;
mod hopf;
mod verify;

pub use bounds::cmd_bounds;
pub use hopf::cmd_hopf;
pub use verify::cmd_verify;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::hopf::WeightedHopfModel;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// An `f64` serialized as a 17-significant-digit JSON number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{:.16e}", self.0)
        } else {
            write!(f, "null")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.to_string()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn ser_nums<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|xs| xs.iter().copied().map(Num).collect::<Vec<_>>()).serialize(s)
}

fn ser_num_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.map(Num).serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Hopf,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTheorem {
    Thm31,
    Thm32,
    Thm41,
    Sandwich,
    Cor31,
}

impl BoundTheorem {
    pub fn label(&self) -> &'static str {
        match self {
            BoundTheorem::Thm31 => "3.1",
            BoundTheorem::Thm32 => "3.2",
            BoundTheorem::Thm41 => "4.1",
            BoundTheorem::Sandwich => "sandwich",
            BoundTheorem::Cor31 => "cor3.1",
        }
    }

    fn needs_p(&self) -> bool {
        matches!(self, BoundTheorem::Thm31 | BoundTheorem::Thm32 | BoundTheorem::Thm41)
    }
}

impl FromStr for BoundTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "3.1" => BoundTheorem::Thm31,
            "3.2" => BoundTheorem::Thm32,
            "4.1" => BoundTheorem::Thm41,
            "sandwich" => BoundTheorem::Sandwich,
            "cor3.1" => BoundTheorem::Cor31,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown theorem {other:?}; expected 3.1, 3.2, 4.1, sandwich or cor3.1"
                )))
            }
        })
    }
}

impl Serialize for BoundTheorem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Everything a run depends on; echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub m: Option<usize>,
    #[serde(serialize_with = "ser_nums")]
    pub theta: Option<Vec<f64>>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub theorem: Option<BoundTheorem>,
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_num_opt")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn verify() -> Self {
        RunConfig {
            command: Command::Verify,
            m: None,
            theta: None,
            p: None,
            q: None,
            theorem: None,
            samples: 0,
            trials: 200,
            seed: 0,
            tol: None,
            inject_fault: false,
        }
    }

    pub fn hopf(theta: Vec<f64>) -> Self {
        RunConfig {
            command: Command::Hopf,
            m: Some(theta.len()),
            theta: Some(theta),
            samples: 100,
            trials: 0,
            ..RunConfig::verify()
        }
    }

    pub fn bounds(theorem: BoundTheorem, theta: Vec<f64>, p: Option<usize>) -> Self {
        RunConfig {
            command: Command::Bounds,
            m: Some(theta.len()),
            theta: Some(theta),
            p,
            theorem: Some(theorem),
            samples: 20,
            trials: 1000,
            ..RunConfig::verify()
        }
    }

    /// The weighted model named by `m` and `theta`; either may be left out
    /// (a missing θ means the Hopf weights).
    pub fn model(&self) -> Result<WeightedHopfModel> {
        let theta = match (&self.theta, self.m) {
            (Some(t), Some(m)) if t.len() != m => {
                return Err(Error::InvalidConfig(format!("--m {m} but {} weights given", t.len())))
            }
            (Some(t), _) => t.clone(),
            (None, Some(m)) => vec![1.0; m],
            (None, None) => return Err(Error::InvalidConfig("--m or --theta is required".into())),
        };
        WeightedHopfModel::new(theta).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Checks the command's preconditions before any work starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidConfig(format!("tolerance must be positive, got {t}")));
            }
        }
        match self.command {
            Command::Verify => {
                if self.trials == 0 {
                    return Err(Error::InvalidConfig("--trials must be at least 1".into()));
                }
                if let Some(q) = self.q {
                    if !(2..=8).contains(&q) {
                        return Err(Error::InvalidConfig(format!("--q must lie in 2..=8, got {q}")));
                    }
                }
            }
            Command::Hopf => {
                self.model()?;
                if self.samples < 2 {
                    return Err(Error::InvalidConfig("--samples must be at least 2".into()));
                }
            }
            Command::Bounds => {
                let model = self.model()?;
                if self.samples == 0 {
                    return Err(Error::InvalidConfig("--samples must be at least 1".into()));
                }
                let theorem = self
                    .theorem
                    .ok_or_else(|| Error::InvalidConfig("--theorem is required".into()))?;
                if theorem.needs_p() {
                    let p = self
                        .p
                        .ok_or_else(|| Error::InvalidConfig(format!("theorem {} needs --p", theorem.label())))?;
                    let q = model.q();
                    if q < 4 || p < 2 || p + 2 > q {
                        return Err(Error::HypothesisViolated(format!(
                            "theorem {} needs q ≥ 4 and 2 ≤ p ≤ q − 2; got q = {q}, p = {p}",
                            theorem.label()
                        )));
                    }
                }
                if theorem == BoundTheorem::Cor31 && self.trials == 0 {
                    return Err(Error::InvalidConfig("--trials must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|lhs − rhs| ≤ tol`
    Eq,
    /// `lhs − rhs ≥ −tol`
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Num,
    pub rhs: Num,
    pub gap: Num,
    pub tol: Num,
    pub pass: bool,
    pub relation: Relation,
    /// A failing gating check makes the run fail; other checks only flag.
    pub gating: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, relation: Relation, lhs: f64, rhs: f64, tol: f64, gating: bool) -> Self {
        let gap = lhs - rhs;
        let pass = match relation {
            Relation::Eq => gap.abs() <= tol,
            Relation::Ge => gap >= -tol,
        };
        Check {
            name: name.into(),
            lhs: Num(lhs),
            rhs: Num(rhs),
            gap: Num(gap),
            tol: Num(tol),
            pass,
            relation,
            gating,
        }
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, Relation::Eq, lhs, rhs, tol, true)
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(name, Relation::Ge, lhs, rhs, tol, true)
    }

    pub fn advisory(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Num,
}

pub fn named(pairs: &[(&str, f64)]) -> Vec<NamedValue> {
    pairs
        .iter()
        .map(|&(n, v)| NamedValue {
            name: n.to_string(),
            value: Num(v),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub kind: String,
    pub detail: String,
    pub values: Vec<NamedValue>,
}

impl Finding {
    pub fn new(kind: &str, detail: impl Into<String>, values: &[(&str, f64)]) -> Self {
        Finding {
            kind: kind.to_string(),
            detail: detail.into(),
            values: named(values),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    IdentityFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub status: Status,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub gating_failures: usize,
    pub findings: usize,
    pub stats: Vec<NamedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_s: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<NamedValue>>,
    pub timing: Timing,
    pub version: &'static str,
}

/// Collects records while a command runs.
pub(crate) struct ReportBuilder {
    config: RunConfig,
    started: Instant,
    checks: Vec<Check>,
    findings: Vec<Finding>,
    stats: Vec<NamedValue>,
    points: Vec<Vec<NamedValue>>,
}

impl ReportBuilder {
    pub(crate) fn new(config: &RunConfig) -> Self {
        ReportBuilder {
            config: config.clone(),
            started: Instant::now(),
            checks: Vec::new(),
            findings: Vec::new(),
            stats: Vec::new(),
            points: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub(crate) fn finding(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub(crate) fn stat(&mut self, name: &str, v: f64) {
        self.stats.extend(named(&[(name, v)]));
    }

    pub(crate) fn point(&mut self, values: &[(&str, f64)]) {
        self.points.push(named(values));
    }

    pub(crate) fn finish(self) -> RunReport {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let gating_failures = self.checks.iter().filter(|c| c.gating && !c.pass).count();
        RunReport {
            summary: Summary {
                status: if gating_failures == 0 { Status::Ok } else { Status::IdentityFailure },
                checks: self.checks.len(),
                passed,
                failed: self.checks.len() - passed,
                gating_failures,
                findings: self.findings.len(),
                stats: self.stats,
            },
            config: self.config,
            checks: self.checks,
            findings: self.findings,
            points: self.points,
            timing: Timing {
                elapsed_s: Num(self.started.elapsed().as_secs_f64()),
            },
            version: VERSION,
        }
    }
}

impl RunReport {
    /// 0 when every gating check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.summary.status {
            Status::Ok => 0,
            Status::IdentityFailure => 1,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// Human-readable digest; every number shown is also in the JSON.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.pass {
                "ok  "
            } else if c.gating {
                "FAIL"
            } else {
                "flag"
            };
            out.push_str(&format!("[{mark}] {}  gap={} tol={}\n", c.name, c.gap, c.tol));
        }
        for f in &self.findings {
            out.push_str(&format!("finding ({}): {}\n", f.kind, f.detail));
            for v in &f.values {
                out.push_str(&format!("    {} = {}\n", v.name, v.value));
            }
        }
        for v in &self.summary.stats {
            out.push_str(&format!("{} = {}\n", v.name, v.value));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} checks, {} passed, {} failed ({} gating), {} findings\n",
            s.checks, s.passed, s.failed, s.gating_failures, s.findings
        ));
        out
    }
}
