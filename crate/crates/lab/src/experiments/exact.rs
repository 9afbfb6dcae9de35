//! Checks anchored on exact computation: the oracle, detailed balance and the
//! recurrence classifier.

use std::collections::BTreeMap;

use anisowalk_core::{ProfileSpec, Rational};

/// Rows `|j| <= k_max` with `p_j = 1 / (2 + floor(sqrt|j|))`, default 1/4
/// beyond. The block sums grow like `k^{3/2}` without being an exact power.
pub fn sqrt_growth_table(k_max: u64) -> ProfileSpec {
    let mut entries = BTreeMap::new();
    for j in -(k_max as i64)..=k_max as i64 {
        let root = (j.unsigned_abs() as f64).sqrt().floor() as i64;
        entries.insert(j, Rational::new(1, 2 + root));
    }
    ProfileSpec::table(entries, Rational::new(1, 4)).expect("probabilities below 1/2")
}

fn bundled() -> Vec<(&'static str, ProfileSpec)> {
    vec![
        ("constant-1/4", ProfileSpec::constant(Rational::new(1, 4)).expect("valid")),
        ("comb", ProfileSpec::comb()),
        (
            "periodic-1/4,1/2",
            ProfileSpec::periodic(vec![Rational::new(1, 4), Rational::new(1, 2)]).expect("valid"),
        ),
        ("hphc", ProfileSpec::half_plane_half_comb()),
        ("powertail-2,2", ProfileSpec::power_tail(2.0, 2.0, 0.25).expect("valid")),
    ]
}

pub mod engine_equivalence {
    use std::collections::BTreeMap;

    use anisowalk_core::engine::{Mechanism, ObserverConfig, Simulator, Site};
    use anisowalk_core::oracle::{exact_origin_local_time_distribution, exact_site_distribution};
    use anisowalk_core::stats::chi_square;
    use anisowalk_core::theory::special::chi_square_quantile;

    use super::bundled;
    use crate::error::LabResult;
    use crate::experiments::Findings;
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::{stream_seed, Runner};

    const MAX_N: u32 = 8;
    const CHUNKS: u64 = 100;
    pub const LEVEL: f64 = 0.999;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "engine-equivalence".into(),
            profile: bundled().iter().map(|p| p.0).collect::<Vec<_>>().join(";"),
            schedule: (1..=u64::from(MAX_N)).collect(),
            replicas: 1_000_000,
            mechanism: "direct+construction".into(),
            observable: "C(N) histogram; Xi((0,0),N) histogram".into(),
            target: "exact_site_distribution; exact_origin_local_time_distribution".into(),
            tolerance: 1.0 - LEVEL,
            seed: 0,
        }
    }

    fn merge<K: Ord>(into: &mut BTreeMap<K, i64>, from: BTreeMap<K, i64>) {
        for (k, v) in from {
            *into.entry(k).or_insert(0) += v;
        }
    }

    fn goodness<K: Ord + Clone>(
        label: String,
        n: u64,
        observed: &BTreeMap<K, i64>,
        expected: &BTreeMap<K, f64>,
        replicas: u64,
    ) -> LabResult<Check> {
        if expected.len() == 1 {
            // A degenerate law: every replica must land on its atom.
            let atom = expected.keys().next().expect("one key");
            let ok = observed.len() == 1 && observed.contains_key(atom);
            return Ok(Check::holds(label, n, ok));
        }
        let c = chi_square(observed, expected, replicas)?;
        let critical = chi_square_quantile(LEVEL, c.dof as f64);
        Ok(Check::new(label, n, replicas, c.statistic, c.dof as f64, critical, Relation::AtMost))
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let mut findings = Findings::default();
        let per_chunk = spec.replicas.div_ceil(CHUNKS);
        let total = per_chunk * CHUNKS;
        for (label, profile) in bundled() {
            for n in 1..=MAX_N {
                let sites: BTreeMap<Site, f64> = exact_site_distribution(&profile, n)?.to_f64_map();
                let local: BTreeMap<u64, f64> = exact_origin_local_time_distribution(&profile, n)?
                    .iter()
                    .map(|(c, p)| (*c, p.to_f64()))
                    .collect();
                let sim = Simulator::new(&profile, u64::from(n));
                for mech in [Mechanism::Direct, Mechanism::Construction] {
                    let part = format!("{label}/{}/N={n}", mech.as_str());
                    let seed = stream_seed(spec.seed, &spec.name, &part);
                    let cfg = ObserverConfig::counters();
                    let chunks = runner.replicas(CHUNKS, seed, |_, mut rng| {
                        let mut at = BTreeMap::new();
                        let mut visits = BTreeMap::new();
                        for _ in 0..per_chunk {
                            let s = sim.run(mech, u64::from(n), &mut rng, &cfg)?;
                            *at.entry(s.pos).or_insert(0i64) += 1;
                            *visits.entry(s.returns_to_origin).or_insert(0i64) += 1;
                        }
                        Ok((at, visits))
                    })?;
                    let mut at = BTreeMap::new();
                    let mut visits = BTreeMap::new();
                    for (a, v) in chunks {
                        merge(&mut at, a);
                        merge(&mut visits, v);
                    }
                    let n64 = u64::from(n);
                    findings
                        .checks
                        .push(goodness(format!("{part} site"), n64, &at, &sites, total)?);
                    findings
                        .checks
                        .push(goodness(format!("{part} origin-local-time"), n64, &visits, &local, total)?);
                }
            }
        }
        Ok(findings)
    }
}

pub mod detailed_balance {
    use anisowalk_core::classifier::detailed_balance_check;
    use anisowalk_core::Rational;
    use anisowalk_core::ProfileSpec;

    use super::{bundled, sqrt_growth_table};
    use crate::error::LabResult;
    use crate::experiments::Findings;
    use crate::outcome::{Check, ExperimentSpec};
    use crate::runner::Runner;

    pub const WINDOW: i64 = 50;

    fn profiles() -> Vec<(String, ProfileSpec)> {
        let mut out: Vec<(String, ProfileSpec)> = bundled()
            .into_iter()
            .filter(|(_, p)| p.is_rational())
            .map(|(l, p)| (l.to_string(), p))
            .collect();
        out.push((
            "periodic-1/3,1/5,1/2".into(),
            ProfileSpec::periodic(vec![Rational::new(1, 3), Rational::new(1, 5), Rational::new(1, 2)]).expect("valid"),
        ));
        out.push(("sqrt-table".into(), sqrt_growth_table(WINDOW as u64)));
        out
    }

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "detailed-balance".into(),
            profile: profiles().iter().map(|p| p.0.clone()).collect::<Vec<_>>().join(";"),
            schedule: vec![],
            replicas: 1,
            mechanism: "none".into(),
            observable: format!("pi(u) p(u,v) - pi(v) p(v,u) on [-{WINDOW},{WINDOW}]^2"),
            target: "0 in exact rational arithmetic".into(),
            tolerance: 0.0,
            seed: 0,
        }
    }

    pub fn run(_: &ExperimentSpec, _: &Runner) -> LabResult<Findings> {
        let checks = profiles()
            .into_iter()
            .map(|(label, p)| Check::holds(format!("{label} detailed balance"), 0, detailed_balance_check(&p, WINDOW)))
            .collect();
        Ok(Findings {
            checks,
            series: vec![],
        })
    }
}

pub mod classifier {
    use anisowalk_core::classifier::{classify, Verdict, DEFAULT_MARGIN};

    use super::{bundled, sqrt_growth_table};
    use crate::error::LabResult;
    use crate::experiments::Findings;
    use crate::outcome::{Check, ExperimentSpec, Series};
    use crate::runner::Runner;

    pub const K_MAX: u64 = 10_000;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "classifier".into(),
            profile: "constant-1/4;comb;periodic-1/4,1/2;powertail-2,2;sqrt-table".into(),
            schedule: vec![K_MAX],
            replicas: 1,
            mechanism: "none".into(),
            observable: "verdict".into(),
            target: "recurrent x3; transient; conjectured-transient".into(),
            tolerance: DEFAULT_MARGIN,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, _: &Runner) -> LabResult<Findings> {
        let mut cases: Vec<_> = bundled()
            .into_iter()
            .filter(|(l, _)| *l != "hphc")
            .map(|(l, p)| {
                let expect = if l.starts_with("powertail") {
                    Verdict::Transient
                } else {
                    Verdict::Recurrent
                };
                (l.to_string(), p, expect)
            })
            .collect();
        cases.push(("sqrt-table".into(), sqrt_growth_table(K_MAX), Verdict::ConjecturedTransient));
        let mut findings = Findings::default();
        for (label, profile, expect) in cases {
            let report = classify(&profile, K_MAX, spec.tolerance)?;
            // Run twice: the verdict must not depend on anything but the input.
            let again = classify(&profile, K_MAX, spec.tolerance)?;
            findings.checks.push(Check::holds(
                format!("{label} -> {} (got {})", expect.as_str(), report.verdict.as_str()),
                K_MAX,
                report.verdict == expect && report == again,
            ));
            findings.series.push(Series {
                name: format!("nash-williams-{label}"),
                x_label: "k".into(),
                y_label: "partial_sum".into(),
                points: report
                    .nash_williams_partial_sums
                    .iter()
                    .map(|&(k, s)| (k as f64, s))
                    .collect(),
            });
        }
        Ok(findings)
    }
}
