//! Checks of the theory module against independent Monte Carlo and identities.

pub mod theory_self_check {
    use anisowalk_core::theory::special::gamma_reflection_residual;
    use anisowalk_core::theory::{marginal_limit_variances, LimitLaw};
    use rand_distr::{Distribution, StandardNormal};

    use crate::error::LabResult;
    use crate::experiments::Findings;
    use crate::outcome::{Check, ExperimentSpec, Relation, Series};
    use crate::runner::{stream_seed, Runner};

    const CHUNKS: u64 = 100;
    const MC_BOUND: f64 = 0.003;
    const REFLECTION_BOUND: f64 = 1e-10;

    pub fn template() -> ExperimentSpec {
        ExperimentSpec {
            name: "theory-self-check".into(),
            profile: "none".into(),
            schedule: vec![],
            replicas: 10_000_000,
            mechanism: "normal pairs".into(),
            observable: "sup over a grid of |quadrature CDF - empirical CDF|".into(),
            target: "0".into(),
            tolerance: MC_BOUND,
            seed: 0,
        }
    }

    /// Largest gap between `law` and the empirical CDF of `sorted` on `grid`.
    fn sup_distance(law: LimitLaw, sorted: &[f64], grid: &[f64]) -> LabResult<(f64, Vec<(f64, f64)>)> {
        let mut worst = 0.0f64;
        let mut curve = Vec::with_capacity(grid.len());
        for &x in grid {
            let empirical = sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64;
            let exact = law.cdf(x)?;
            worst = worst.max((empirical - exact).abs());
            curve.push((x, exact));
        }
        Ok((worst, curve))
    }

    pub fn run(spec: &ExperimentSpec, runner: &Runner) -> LabResult<Findings> {
        let per_chunk = spec.replicas.div_ceil(CHUNKS);
        let seed = stream_seed(spec.seed, &spec.name, "normal-pairs");
        let chunks = runner.replicas(CHUNKS, seed, |_, mut rng| {
            let mut a = Vec::with_capacity(per_chunk as usize);
            let mut b = Vec::with_capacity(per_chunk as usize);
            for _ in 0..per_chunk {
                let u: f64 = StandardNormal.sample(&mut rng);
                let v: f64 = StandardNormal.sample(&mut rng);
                a.push(u * v.abs().sqrt());
                b.push(2.0 * u.abs() * v.abs().sqrt());
            }
            Ok((a, b))
        })?;
        let total = per_chunk * CHUNKS;
        let (mut u_root_z, mut two_u_root_v): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        for (a, b) in chunks {
            u_root_z.extend(a);
            two_u_root_v.extend(b);
        }
        u_root_z.sort_by(f64::total_cmp);
        two_u_root_v.sort_by(f64::total_cmp);

        let symmetric: Vec<f64> = (-80..=80).map(|i| f64::from(i) * 0.05).collect();
        let positive: Vec<f64> = (0..=160).map(|i| f64::from(i) * 0.05).collect();
        let (d1, curve1) = sup_distance(LimitLaw::UrootAbsZ, &u_root_z, &symmetric)?;
        let (d2, curve2) = sup_distance(LimitLaw::TwoAbsUrootV, &two_u_root_v, &positive)?;

        let residual = gamma_reflection_residual();
        let split_error = [1.0, 1.25, 1.5, 2.0, 3.0, 10.0]
            .iter()
            .map(|&g| marginal_limit_variances(g).map(|(a, b)| (a + b - 1.0).abs()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);

        Ok(Findings {
            checks: vec![
                Check::new("sup |CDF - MC| U sqrt|Z|", 0, total, d1, 0.0, spec.tolerance, Relation::AtMost),
                Check::new("sup |CDF - MC| 2|U|sqrt|V|", 0, total, d2, 0.0, spec.tolerance, Relation::AtMost),
                Check::new("Gamma(1/4) reflection residual", 0, 1, residual, 0.0, REFLECTION_BOUND, Relation::AtMost),
                Check::new("variance split sums to 1", 0, 1, split_error, 0.0, 4.0 * f64::EPSILON, Relation::AtMost),
            ],
            series: vec![
                Series {
                    name: "cdf-u-root-abs-z".into(),
                    x_label: "x".into(),
                    y_label: "cdf".into(),
                    points: curve1,
                },
                Series {
                    name: "cdf-two-abs-u-root-v".into(),
                    x_label: "x".into(),
                    y_label: "cdf".into(),
                    points: curve2,
                },
            ],
        })
    }
}
