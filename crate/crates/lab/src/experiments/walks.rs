//! Monte Carlo checks of limit laws and scaling exponents.

use anisowalk_core::{ProfileSpec, Rational};

fn periodic() -> ProfileSpec {
    ProfileSpec::periodic(vec![Rational::new(1, 4), Rational::new(1, 2)]).expect("valid")
}

fn simple() -> ProfileSpec {
    ProfileSpec::constant(Rational::new(1, 4)).expect("valid")
}

/// Powers `C2 -> C2^2` etc. are taken in `f64`; this keeps the casts in one place.
fn scaled(x: i64, n: u64, power: f64) -> f64 {
    x as f64 / (n as f64).powf(power)
}

pub mod simple_walk_return {
    use anisowalk_core::engine::{ObserverConfig, Simulator, Site};
    use anisowalk_core::theory::periodic_return_prob;

    use super::simple;
    use crate::error::LabResult;
    use crate::experiments::{mechanism, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::{stream_seed, Runner};

    const HALF_TIME: u64 = 200;
    const CHUNKS: u64 = 400;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "simple-walk-return".into(),
            profile: "constant-1/4".into(),
            schedule: vec![2 * HALF_TIME],
            replicas: 4_000_000,
            mechanism: "construction".into(),
            observable: "P(C(2N) = (0,0)), N = 200".into(),
            target: "periodic-return-prob(gamma=2, p0=1/4) = 1/(pi N)".into(),
            tolerance: 0.10,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let n = 2 * HALF_TIME;
        let sim = Simulator::new(&simple(), n);
        let mech = mechanism(spec);
        let per_chunk = spec.replicas.div_ceil(CHUNKS);
        let chunks = spec.replicas.div_ceil(per_chunk);
        let seed = stream_seed(spec.seed, &spec.name, "walks");
        let cfg = ObserverConfig::counters();
        let hits = runner.replicas(chunks, seed, |c, mut rng| {
            let todo = per_chunk.min(spec.replicas - c * per_chunk);
            let mut hits = 0u64;
            for _ in 0..todo {
                hits += u64::from(sim.run(mech, n, &mut rng, &cfg)?.pos == Site::ORIGIN);
            }
            Ok(hits)
        })?;
        let freq = hits.iter().sum::<u64>() as f64 / spec.replicas as f64;
        let target = periodic_return_prob(2.0, 0.25, HALF_TIME)?;
        Ok(Findings {
            checks: vec![Check::new(
                "P(C(400) = 0) vs 1/(200 pi)",
                n,
                spec.replicas,
                freq,
                target,
                spec.tolerance,
                Relation::RelativeWithin,
            )],
            series: vec![],
        })
    }
}

pub mod periodic_marginals {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::stats::SampleSet;
    use anisowalk_core::theory::{marginal_limit_variances, LimitLaw};

    use super::{periodic, scaled};
    use crate::error::LabResult;
    use crate::experiments::{ks, walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::Runner;

    const N: u64 = 100_000;
    const KS_BOUND: f64 = 0.03;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "periodic-marginals".into(),
            profile: "periodic-1/4,1/2".into(),
            schedule: vec![N],
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "C1(N)/sqrt N, C2(N)/sqrt N".into(),
            target: "normal(0, 1 - 1/gamma), normal(0, 1/gamma), gamma = 3/2".into(),
            tolerance: 0.05,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let profile = periodic();
        let gamma = profile.gamma_periodic()?;
        let (v1, v2) = marginal_limit_variances(gamma)?;
        let pairs = walks(spec, runner, "walks", &profile, N, &ObserverConfig::counters(), |s| {
            (scaled(s.pos.k, N, 0.5), scaled(s.pos.j, N, 0.5))
        })?;
        let (c1, c2): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let r = spec.replicas;
        let mut checks = Vec::new();
        for (name, values, v) in [("C1", c1, v1), ("C2", c2, v2)] {
            let var = SampleSet::new(values.clone()).variance()?;
            checks.push(Check::new(format!("var {name}/sqrt N"), N, r, var, v, spec.tolerance, Relation::RelativeWithin));
            let d = ks(values, LimitLaw::ScaledNormal { variance: v })?;
            checks.push(Check::new(format!("KS {name}/sqrt N"), N, r, d, 0.0, KS_BOUND, Relation::AtMost));
        }
        Ok(Findings {
            checks,
            series: vec![],
        })
    }
}

pub mod comb_scaling {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::stats::{loglog_slope, SampleSet};
    use anisowalk_core::theory::LimitLaw;
    use anisowalk_core::ProfileSpec;

    use super::scaled;
    use crate::error::LabResult;
    use crate::experiments::{ks, log_schedule, walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation, Series};
    use crate::runner::Runner;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "comb-scaling".into(),
            profile: "comb".into(),
            schedule: log_schedule(4, 6, 3),
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "C2(N)/sqrt N; C1(N)/N^{1/4}; median |C1(N)|".into(),
            target: "normal(0,1); U sqrt|Z|; exponent 1/4".into(),
            tolerance: 0.03,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let n = *spec.schedule.last().expect("non-empty schedule");
        let cfg = ObserverConfig::counters().with_checkpoints(spec.schedule.clone());
        let paths = walks(spec, runner, "walks", &ProfileSpec::comb(), n, &cfg, |s| {
            s.snapshots.iter().map(|p| p.pos).collect::<Vec<_>>()
        })?;
        let r = spec.replicas;
        let last = spec.schedule.len() - 1;
        let c1: Vec<f64> = paths.iter().map(|p| scaled(p[last].k, n, 0.25)).collect();
        let c2: Vec<f64> = paths.iter().map(|p| scaled(p[last].j, n, 0.5)).collect();
        let mut checks = vec![
            Check::new("KS C2/sqrt N", n, r, ks(c2, LimitLaw::StdNormal)?, 0.0, spec.tolerance, Relation::AtMost),
            Check::new("KS C1/N^{1/4}", n, r, ks(c1, LimitLaw::UrootAbsZ)?, 0.0, 0.05, Relation::AtMost),
        ];
        let mut points = Vec::new();
        for (i, &m) in spec.schedule.iter().enumerate() {
            let abs: Vec<f64> = paths.iter().map(|p| p[i].k.unsigned_abs() as f64).collect();
            points.push((m as f64, SampleSet::new(abs).median()?));
        }
        let fit = loglog_slope(&points)?;
        checks.push(Check::new("slope median |C1|", n, r, fit.slope, 0.25, 0.03, Relation::Within));
        Ok(Findings {
            checks,
            series: vec![Series {
                name: "median-abs-c1".into(),
                x_label: "log_N".into(),
                y_label: "log_median_abs_C1".into(),
                points: fit.grid,
            }],
        })
    }
}

pub mod comb_local_time {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::theory::LimitLaw;
    use anisowalk_core::ProfileSpec;

    use crate::error::LabResult;
    use crate::experiments::{ks, walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::Runner;

    const N: u64 = 1_000_000;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "comb-local-time".into(),
            profile: "comb".into(),
            schedule: vec![N],
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "Xi((0,0),N)/N^{1/4}".into(),
            target: "2|U|sqrt|V|".into(),
            tolerance: 0.05,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let scale = (N as f64).powf(0.25);
        let xs = walks(spec, runner, "walks", &ProfileSpec::comb(), N, &ObserverConfig::counters(), |s| {
            s.returns_to_origin as f64 / scale
        })?;
        let d = ks(xs, LimitLaw::TwoAbsUrootV)?;
        Ok(Findings {
            checks: vec![Check::new("KS Xi/N^{1/4}", N, spec.replicas, d, 0.0, spec.tolerance, Relation::AtMost)],
            series: vec![],
        })
    }
}

pub mod darling_kac {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::theory::{green_truncated, LimitLaw};

    use super::periodic;
    use crate::error::LabResult;
    use crate::experiments::{ks, walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation, Series};
    use crate::runner::Runner;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "darling-kac".into(),
            profile: "periodic-1/4,1/2".into(),
            schedule: vec![10_000, 1_000_000],
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "Xi((0,0),N)/g(N), g(N) = log N / (4 p0 pi sqrt(gamma - 1))".into(),
            target: "exponential(1)".into(),
            tolerance: 0.10,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let profile = periodic();
        let gamma = profile.gamma_periodic()?;
        let p0 = profile.p(0);
        let n = *spec.schedule.last().expect("non-empty schedule");
        let cfg = ObserverConfig::counters().with_checkpoints(spec.schedule.clone());
        let counts = walks(spec, runner, "walks", &profile, n, &cfg, |s| {
            s.snapshots.iter().map(|p| p.returns_to_origin).collect::<Vec<_>>()
        })?;
        let mut ks_values = Vec::new();
        // Xi is integer valued; its atom at zero bounds KS from below.
        let mut zero_atom = Vec::new();
        for (i, &m) in spec.schedule.iter().enumerate() {
            let g = green_truncated(gamma, p0, m as f64)?;
            let xs = counts.iter().map(|c| c[i] as f64 / g).collect();
            ks_values.push((m as f64, ks(xs, LimitLaw::Exponential1)?));
            let zeros = counts.iter().filter(|c| c[i] == 0).count();
            zero_atom.push((m as f64, zeros as f64 / counts.len() as f64));
        }
        let r = spec.replicas;
        let (first, last) = (ks_values[0].1, ks_values[ks_values.len() - 1].1);
        Ok(Findings {
            checks: vec![
                Check::new("KS Xi/g(N) vs Exp(1)", n, r, last, 0.0, spec.tolerance, Relation::AtMost),
                Check::new("KS decreases from first to last N", n, r, last, first, 0.0, Relation::Below),
            ],
            series: vec![
                Series {
                    name: "ks".into(),
                    x_label: "N".into(),
                    y_label: "KS".into(),
                    points: ks_values,
                },
                Series {
                    name: "zero-atom".into(),
                    x_label: "N".into(),
                    y_label: "P(Xi = 0)".into(),
                    points: zero_atom,
                },
            ],
        })
    }
}

pub mod range_lln {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::theory::expected_range_periodic;

    use super::simple;
    use crate::error::LabResult;
    use crate::experiments::{walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation, Series};
    use crate::runner::Runner;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "range-lln".into(),
            profile: "constant-1/4".into(),
            schedule: vec![10_000, 1_000_000],
            replicas: 100,
            mechanism: "direct".into(),
            observable: "mean R(N) log N / (pi N)".into(),
            target: "1".into(),
            tolerance: 0.15,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let n = *spec.schedule.last().expect("non-empty schedule");
        let cfg = ObserverConfig::full_field().with_checkpoints(spec.schedule.clone());
        let ranges = walks(spec, runner, "walks", &simple(), n, &cfg, |s| {
            s.snapshots.iter().map(|p| p.range.unwrap_or(0)).collect::<Vec<_>>()
        })?;
        let mut means = Vec::new();
        for (i, &m) in spec.schedule.iter().enumerate() {
            let norm = expected_range_periodic(2.0, m as f64)?;
            let mean = ranges.iter().map(|r| r[i] as f64 / norm).sum::<f64>() / ranges.len() as f64;
            means.push((m as f64, mean));
        }
        let r = spec.replicas;
        let (first, last) = (means[0].1, means[means.len() - 1].1);
        Ok(Findings {
            checks: vec![
                Check::new("mean R log N/(pi N)", n, r, last, 1.0, spec.tolerance, Relation::Within),
                Check::new("distance to 1 shrinks", n, r, (last - 1.0).abs(), (first - 1.0).abs(), 0.0, Relation::Below),
            ],
            series: vec![Series {
                name: "normalized-range".into(),
                x_label: "N".into(),
                y_label: "mean_R_logN_over_piN".into(),
                points: means,
            }],
        })
    }
}

pub mod powertail_exponents {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::stats::{loglog_slope, SampleSet};
    use anisowalk_core::ProfileSpec;

    use crate::error::LabResult;
    use crate::experiments::{log_schedule, walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation, Series};
    use crate::runner::Runner;

    pub const GAMMA: f64 = 2.0;
    pub const P0: f64 = 0.25;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "powertail-exponents".into(),
            profile: format!("powertail(gamma={GAMMA},alpha=1/2,p0={P0});powertail(gamma={GAMMA},alpha=2,p0={P0})"),
            schedule: log_schedule(4, 6, 3),
            replicas: 2_000,
            mechanism: "construction".into(),
            observable: "median H_N (alpha=1/2); IQR of C2(N) (alpha=2)".into(),
            target: "exponents 3/4 and 1/3".into(),
            tolerance: 0.05,
            seed: 0,
        }
    }

    fn slope(
        spec: &ExperimentSpec,
        runner: &Runner,
        alpha: f64,
        stat: impl Fn(&SampleSet) -> anisowalk_core::Result<f64>,
        observe: impl Fn(&anisowalk_core::engine::Snapshot) -> f64 + Sync,
    ) -> LabResult<(f64, Vec<(f64, f64)>)> {
        let profile = ProfileSpec::power_tail(GAMMA, alpha, P0)?;
        let n = *spec.schedule.last().expect("non-empty schedule");
        let cfg = ObserverConfig::counters().with_checkpoints(spec.schedule.clone());
        let paths = walks(spec, runner, &format!("alpha={alpha}"), &profile, n, &cfg, |s| {
            s.snapshots.iter().map(&observe).collect::<Vec<_>>()
        })?;
        let mut points = Vec::new();
        for (i, &m) in spec.schedule.iter().enumerate() {
            let set = SampleSet::new(paths.iter().map(|p| p[i]).collect());
            points.push((m as f64, stat(&set)?));
        }
        let fit = loglog_slope(&points)?;
        Ok((fit.slope, fit.grid))
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let n = *spec.schedule.last().expect("non-empty schedule");
        let r = spec.replicas;
        let (h_slope, h_grid) = slope(spec, runner, 0.5, SampleSet::median, |p| p.horizontal as f64)?;
        let (c_slope, c_grid) = slope(spec, runner, 2.0, SampleSet::iqr, |p| p.pos.j as f64)?;
        Ok(Findings {
            checks: vec![
                Check::new("alpha=1/2 slope median H_N", n, r, h_slope, 0.75, spec.tolerance, Relation::Within),
                Check::new("alpha=2 slope IQR C2", n, r, c_slope, 1.0 / 3.0, spec.tolerance, Relation::Within),
            ],
            series: vec![
                Series {
                    name: "alpha-0.5-median-h".into(),
                    x_label: "log_N".into(),
                    y_label: "log_median_H".into(),
                    points: h_grid,
                },
                Series {
                    name: "alpha-2-iqr-c2".into(),
                    x_label: "log_N".into(),
                    y_label: "log_IQR_C2".into(),
                    points: c_grid,
                },
            ],
        })
    }
}

pub mod comb_ratio_ergodic {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::stats::SampleSet;
    use anisowalk_core::ProfileSpec;

    use crate::error::LabResult;
    use crate::experiments::{walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::Runner;

    const N: u64 = 1_000_000;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "comb-ratio-ergodic".into(),
            profile: "comb".into(),
            schedule: vec![N],
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "median H_N / xi2(0, V_N), xi2 counting time 0".into(),
            target: "f-bar = sum_j (1 - 2 p_j) / (2 p_j) = 1".into(),
            tolerance: 0.10,
            seed: 0,
        }
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let profile = ProfileSpec::comb();
        // Only the backbone row has a horizontal burst.
        let f_bar: f64 = (-2..=2).map(|j| profile.drift_weight(j)).sum();
        let ratios = walks(spec, runner, "walks", &profile, N, &ObserverConfig::counters(), |s| {
            s.horizontal as f64 / (s.xi2_zero + 1) as f64
        })?;
        let median = SampleSet::new(ratios).median()?;
        Ok(Findings {
            checks: vec![Check::new(
                "median H_N / xi2",
                N,
                spec.replicas,
                median,
                f_bar,
                spec.tolerance,
                Relation::RelativeWithin,
            )],
            series: vec![],
        })
    }
}

pub mod hphc_asymmetry {
    use anisowalk_core::engine::ObserverConfig;
    use anisowalk_core::ProfileSpec;

    use crate::error::LabResult;
    use crate::experiments::{walks, Findings};
    use crate::outcome::{Check, ExperimentSpec, Relation};
    use crate::runner::Runner;

    const N: u64 = 1_000_000;
    const LEVEL: f64 = 1.2;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "hphc-asymmetry".into(),
            profile: "hphc".into(),
            schedule: vec![N],
            replicas: 10_000,
            mechanism: "construction".into(),
            observable: "P(C2 < -1.2 sqrt N) vs P(C2 > 1.2 sqrt N)".into(),
            target: "two-proportion z-score".into(),
            tolerance: 3.0,
            seed: 0,
        }
    }

    /// Pooled two-proportion z-score of `a` versus `b` successes out of `n` each.
    pub fn z_score(a: u64, b: u64, n: u64) -> f64 {
        let (pa, pb) = (a as f64 / n as f64, b as f64 / n as f64);
        let pooled = (a + b) as f64 / (2 * n) as f64;
        let se = (pooled * (1.0 - pooled) * 2.0 / n as f64).sqrt();
        if se == 0.0 {
            return 0.0;
        }
        (pa - pb) / se
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let cut = LEVEL * (N as f64).sqrt();
        let c2 = walks(spec, runner, "walks", &ProfileSpec::half_plane_half_comb(), N, &ObserverConfig::counters(), |s| {
            s.pos.j as f64
        })?;
        let low = c2.iter().filter(|&&y| y < -cut).count() as u64;
        let high = c2.iter().filter(|&&y| y > cut).count() as u64;
        let z = z_score(low, high, spec.replicas);
        Ok(Findings {
            checks: vec![Check::new("z(lower tail - upper tail)", N, spec.replicas, z, 0.0, spec.tolerance, Relation::AtLeast)],
            series: vec![],
        })
    }

    #[cfg(test)]
    mod tests {
        #[test]
        fn z_score_examples() {
            assert_eq!(super::z_score(5, 5, 100), 0.0);
            assert_eq!(super::z_score(0, 0, 100), 0.0);
            // pooled 0.15: se = sqrt(0.15 * 0.85 * 2 / 100) = 0.0505
            let z = super::z_score(20, 10, 100);
            assert!((z - 0.1 / (0.15f64 * 0.85 * 0.02).sqrt()).abs() < 1e-12);
        }
    }
}
