//! The experiment registry.
//!
//! Each entry pairs default settings with the code that runs it and
//! turns the measurements into [`Check`]s.

mod exact;
mod selfcheck;
mod walks;

use std::time::Instant;

use anisowalk_core::engine::{Mechanism, ObserverConfig, Simulator, WalkSummary};
use anisowalk_core::stats::{ks_statistic, SampleSet};
use anisowalk_core::theory::LimitLaw;
use anisowalk_core::ProfileSpec;

use crate::error::{LabError, LabResult};
use crate::outcome::{Check, ExperimentOutcome, ExperimentSpec, Series};
use crate::runner::{stream_seed, Runner, SEED_RULE};

pub use exact::sqrt_growth_table;

/// What an experiment produced.
#[derive(Default)]
pub struct Findings {
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
}

pub struct ExperimentDef {
    pub name: &'static str,
    /// Acceptance criterion the experiment decides.
    pub criterion: &'static str,
    /// The result being reproduced.
    pub anchor: &'static str,
    pub summary: &'static str,
    template: fn() -> ExperimentSpec,
    run: fn(&ExperimentSpec, &Runner) -> LabResult<Findings>,
}

impl ExperimentDef {
    /// The registered settings with the given seed.
    pub fn spec(&self, seed: u64) -> ExperimentSpec {
        ExperimentSpec {
            seed,
            ..(self.template)()
        }
    }
}

macro_rules! def {
    ($name:literal, $crit:literal, $anchor:literal, $summary:literal, $module:ident :: $f:ident) => {
        ExperimentDef {
            name: $name,
            criterion: $crit,
            anchor: $anchor,
            summary: $summary,
            template: $module::$f::template,
            run: $module::$f::run,
        }
    };
}

static REGISTRY: &[ExperimentDef] = &[
    def!("engine-equivalence", "A1", "transition law of the walk",
        "both engines against the exact site and origin local-time laws, N = 1..8", exact::engine_equivalence),
    def!("detailed-balance", "A2", "reversibility with invariant measure 1/p_j",
        "exact detailed balance on [-50,50]^2 for rational profiles", exact::detailed_balance),
    def!("classifier", "A3", "Nash-Williams recurrence criterion",
        "recurrence verdicts for the bundled profiles and a k^1.5 table", exact::classifier),
    def!("simple-walk-return", "A4", "local limit theorem, simple random walk",
        "P(C(2N) = 0) against 1/(pi N) at N = 200", walks::simple_walk_return),
    def!("periodic-marginals", "A5", "periodic profile invariance principle",
        "variances and laws of C1/sqrt N and C2/sqrt N for gamma = 3/2", walks::periodic_marginals),
    def!("comb-scaling", "A6", "comb limit (U sqrt|Z|, W2)",
        "comb coordinates at N^{1/4} and N^{1/2}; median |C1| exponent", walks::comb_scaling),
    def!("comb-local-time", "A7", "comb origin local time limit",
        "Xi(0, N) / N^{1/4} against 2|U|sqrt|V|", walks::comb_local_time),
    def!("darling-kac", "A8", "Darling-Kac law for periodic profiles",
        "Xi(0, N) / g(N) against Exp(1), with improvement from N = 1e4", walks::darling_kac),
    def!("range-lln", "A9", "range law of large numbers (Dvoretzky-Erdos)",
        "R(N) log N / (pi N) for the simple walk", walks::range_lln),
    def!("powertail-exponents", "A10", "power-tail scaling regimes",
        "median H_N exponent for alpha = 1/2 and C2 spread exponent for alpha = 2", walks::powertail_exponents),
    def!("comb-ratio-ergodic", "A11", "ratio ergodic relation H_N ~ f-bar xi2",
        "median H_N / xi2(0, V_N) on the comb", walks::comb_ratio_ergodic),
    def!("hphc-asymmetry", "A12", "half-plane half-comb asymmetric liminf",
        "lower versus upper tail of C2(N) / sqrt N", walks::hphc_asymmetry),
    def!("theory-self-check", "A13", "limit-law and constant evaluation",
        "quadrature CDFs against Monte Carlo; Gamma(1/4); variance split", selfcheck::theory_self_check),
];

pub fn registry() -> &'static [ExperimentDef] {
    REGISTRY
}

pub fn find(name: &str) -> LabResult<&'static ExperimentDef> {
    REGISTRY
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| LabError::UnknownExperiment(name.to_string()))
}

/// Replica-count adjustments from the command line or a config file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub replicas: Option<u64>,
    pub scale: Option<f64>,
}

/// The registered settings for `name`, adjusted by `overrides`.
pub fn resolve(name: &str, seed: u64, overrides: Overrides) -> LabResult<ExperimentSpec> {
    let mut spec = find(name)?.spec(seed);
    if let Some(s) = overrides.scale {
        if !(s > 0.0 && s.is_finite()) {
            return Err(LabError::Config(format!("scale must be positive, got {s}")));
        }
        spec.replicas = ((spec.replicas as f64 * s).round() as u64).max(1);
    }
    if let Some(r) = overrides.replicas {
        spec.replicas = r.max(1);
    }
    Ok(spec)
}

pub fn run_experiment(spec: &ExperimentSpec, runner: &Runner, timing: bool) -> LabResult<ExperimentOutcome> {
    let def = find(&spec.name)?;
    let start = Instant::now();
    let findings = (def.run)(spec, runner)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(ExperimentOutcome {
        spec: spec.clone(),
        pass: findings.checks.iter().all(|c| c.pass),
        checks: findings.checks,
        series: findings.series,
        wall_time_s: timing.then_some(elapsed),
        seed_rule: SEED_RULE.to_string(),
    })
}

// Shared helpers for the experiment modules.

pub(crate) fn mechanism(spec: &ExperimentSpec) -> Mechanism {
    if spec.mechanism == "direct" {
        Mechanism::Direct
    } else {
        Mechanism::Construction
    }
}

/// `spec.replicas` independent walks of `n` steps, one stream per replica.
pub(crate) fn walks<T: Send>(
    spec: &ExperimentSpec,
    runner: &Runner,
    part: &str,
    profile: &ProfileSpec,
    n: u64,
    cfg: &ObserverConfig,
    keep: impl Fn(&WalkSummary) -> T + Sync,
) -> LabResult<Vec<T>> {
    let sim = Simulator::new(profile, n);
    let mech = mechanism(spec);
    let seed = stream_seed(spec.seed, &spec.name, part);
    runner.replicas(spec.replicas, seed, |_, rng| {
        let summary = sim.run(mech, n, rng, cfg)?;
        Ok(keep(&summary))
    })
}

pub(crate) fn ks(values: Vec<f64>, law: LimitLaw) -> LabResult<f64> {
    Ok(ks_statistic(&SampleSet::new(values), |x| law.cdf(x))?)
}

/// `10^a, ..., 10^b` with `per_decade` points per decade, rounded.
pub(crate) fn log_schedule(a: u32, b: u32, per_decade: u32) -> Vec<u64> {
    let steps = (b - a) * per_decade;
    (0..=steps)
        .map(|i| {
            let e = f64::from(a) + f64::from(i) / f64::from(per_decade);
            10f64.powf(e).round() as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        assert!(registry().len() >= 10);
        let mut names: Vec<_> = registry().iter().map(|d| d.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), registry().len());
        for (i, d) in registry().iter().enumerate() {
            assert_eq!(d.criterion, format!("A{}", i + 1));
            let spec = d.spec(3);
            assert_eq!(spec.name, d.name);
            assert_eq!(spec.seed, 3);
            assert!(spec.replicas >= 1);
        }
        assert_eq!(find("comb-local-time").unwrap().anchor, "comb origin local time limit");
        assert!(find("range-lln").unwrap().anchor.contains("range"));
        assert!(matches!(find("nope"), Err(LabError::UnknownExperiment(_))));
    }

    #[test]
    fn overrides() {
        let s = resolve("comb-scaling", 1, Overrides { replicas: None, scale: Some(0.01) }).unwrap();
        assert_eq!(s.replicas, 100);
        let s = resolve("comb-scaling", 1, Overrides { replicas: Some(7), scale: Some(0.5) }).unwrap();
        assert_eq!(s.replicas, 7);
        assert!(resolve("comb-scaling", 1, Overrides { replicas: None, scale: Some(-1.0) }).is_err());
    }

    #[test]
    fn schedules() {
        assert_eq!(log_schedule(4, 6, 2), vec![10_000, 31_623, 100_000, 316_228, 1_000_000]);
    }
}
