//! Experiment records: the resolved settings and what was measured.

use serde::{Deserialize, Serialize};

/// A fully resolved experiment: no field is left to a default at run time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    /// Profile label(s) the experiment simulates.
    pub profile: String,
    /// Walk lengths at which observables are taken.
    pub schedule: Vec<u64>,
    pub replicas: u64,
    pub mechanism: String,
    pub observable: String,
    /// The limit law or formula the statistic is compared with.
    pub target: String,
    /// Tolerance of the headline check.
    pub tolerance: f64,
    pub seed: u64,
}

/// How a statistic is compared with its target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|statistic - target| <= tolerance`.
    Within,
    /// `|statistic / target - 1| <= tolerance`.
    RelativeWithin,
    /// `statistic <= tolerance` (target is the ideal value).
    AtMost,
    /// `statistic >= tolerance`.
    AtLeast,
    /// `statistic < target`.
    Below,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub replicas: u64,
    pub statistic: f64,
    pub target: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, n: u64, replicas: u64, statistic: f64, target: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Within => (statistic - target).abs() <= tolerance,
            Relation::RelativeWithin => (statistic / target - 1.0).abs() <= tolerance,
            Relation::AtMost => statistic <= tolerance,
            Relation::AtLeast => statistic >= tolerance,
            Relation::Below => statistic < target,
        };
        Self {
            label: label.into(),
            n,
            replicas,
            statistic,
            target,
            tolerance,
            relation,
            pass,
        }
    }

    /// A yes/no property: statistic 1 means it held.
    pub fn holds(label: impl Into<String>, n: u64, ok: bool) -> Self {
        Self::new(label, n, 1, f64::from(u8::from(ok)), 1.0, 0.0, Relation::Within)
    }
}

/// Two-column plot data: one series per file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub spec: ExperimentSpec,
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
    pub pass: bool,
    /// Seconds; `None` when timing is suppressed for reproducible output.
    pub wall_time_s: Option<f64>,
    pub seed_rule: String,
}

impl ExperimentOutcome {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
