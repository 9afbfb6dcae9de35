//! Recurrence and transience verdicts.
//!
//! Cutting the lattice into concentric square shells, the conductance between
//! shell `k` and shell `k + 1` is `sum_{j=-k}^{k} 1/p_j`, so the walk is
//! recurrent when `sum_k (sum_{j=-k}^{k} 1/p_j)^{-1}` diverges. It is
//! transient when the inner sum grows like `C k^{1+A}` with `A > 0`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::engine::Site;
use crate::profiles::{ratio_to_f64, ProfileKind, ProfileSpec, Rational};
use crate::stats::loglog_slope;
use crate::{Error, Result};

/// Default margin above exponent 1 before growth counts as super-linear.
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Log-residual (RMS) above which the growth is not treated as a power law.
pub const MAX_FIT_RESIDUAL: f64 = 0.05;

const FIT_POINTS: usize = 41;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Recurrent,
    Transient,
    /// Summable cut series without a provable power form: transient only
    /// under the open converse of the recurrence criterion.
    ConjecturedTransient,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Recurrent => "recurrent",
            Verdict::Transient => "transient",
            Verdict::ConjecturedTransient => "conjectured-transient",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    /// `(k, sum_{i<=k} term_i)` on a log-spaced grid ending at `K_max`.
    pub nash_williams_partial_sums: Vec<(u64, f64)>,
    /// Slope of `log sum_{j=-k}^{k} 1/p_j` against `log k` over `[K_max/10, K_max]`.
    pub fitted_growth_exponent: f64,
    pub fit_residual: f64,
    /// `A` in `C k^{1+A}` when known analytically.
    pub transience_exponent: Option<f64>,
    pub rationale: &'static str,
}

/// Conductance of the edge between `u` and `v` (zero unless neighbours).
pub fn conductance(profile: &ProfileSpec, u: Site, v: Site) -> f64 {
    let dk = (u.k - v.k).abs();
    let dj = (u.j - v.j).abs();
    match (dk, dj) {
        (0, 1) => 1.0,
        (1, 0) => 1.0 / (2.0 * profile.p(u.j)) - 1.0,
        _ => 0.0,
    }
}

/// `term_k = (sum_{j=-k}^{k} 1/p_j)^{-1}` for `k = 0..=K`.
pub fn nash_williams_terms(profile: &ProfileSpec, k_max: u64) -> Vec<f64> {
    profile
        .inverse_p_block_sums(k_max)
        .into_iter()
        .map(|s| 1.0 / s)
        .collect()
}

fn log_grid(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    let (a, b) = (libm::log(lo as f64), libm::log(hi as f64));
    let mut grid: Vec<u64> = (0..points)
        .map(|i| libm::round(libm::exp(a + (b - a) * i as f64 / (points - 1) as f64)) as u64)
        .collect();
    grid.dedup();
    grid
}

pub fn classify(profile: &ProfileSpec, k_max: u64, margin: f64) -> Result<ClassificationReport> {
    if k_max < 100 {
        return Err(Error::WindowTooSmall(k_max));
    }
    let sums = profile.inverse_p_block_sums(k_max);

    let mut partial = 0.0;
    let mut partials = Vec::with_capacity(sums.len());
    for s in &sums {
        partial += 1.0 / s;
        partials.push(partial);
    }
    let mut record = alloc::vec![0];
    record.extend(log_grid(1, k_max, FIT_POINTS));
    let nash_williams_partial_sums = record
        .into_iter()
        .map(|k| (k, partials[k as usize]))
        .collect();

    let points: Vec<(f64, f64)> = log_grid((k_max / 10).max(1), k_max, FIT_POINTS)
        .into_iter()
        .map(|k| (k as f64, sums[k as usize]))
        .collect();
    let fit = loglog_slope(&points)?;

    let analytic = match profile.kind() {
        ProfileKind::Constant { .. }
        | ProfileKind::Periodic { .. }
        | ProfileKind::Comb
        | ProfileKind::HalfPlaneHalfComb => Some((Verdict::Recurrent, None, "min-p-positive")),
        ProfileKind::PowerTail { alpha, .. } if *alpha > 1.0 => {
            Some((Verdict::Transient, Some(alpha - 1.0), "power-growth-transient"))
        }
        // alpha <= 1 keeps p_j bounded away from zero.
        ProfileKind::PowerTail { .. } => Some((Verdict::Recurrent, None, "min-p-positive")),
        // A table is read as a finite window of an unknown infinite profile, so
        // only the numeric growth over the window is used.
        ProfileKind::Table { .. } => None,
    };

    let (verdict, transience_exponent, rationale) = match analytic {
        Some(v) => v,
        None => {
            if !fit.slope.is_finite() || fit.residual > MAX_FIT_RESIDUAL {
                (Verdict::Inconclusive, None, "growth-not-power-law")
            } else if fit.slope <= 1.0 + margin {
                (Verdict::Recurrent, None, "fitted-growth-linear")
            } else {
                (Verdict::ConjecturedTransient, None, "fitted-growth-superlinear")
            }
        }
    };

    Ok(ClassificationReport {
        verdict,
        nash_williams_partial_sums,
        fitted_growth_exponent: fit.slope,
        fit_residual: fit.residual,
        transience_exponent,
        rationale,
    })
}

/// Transition probability of the direct chain from `u` to `v`.
pub fn transition_exact(profile: &ProfileSpec, u: Site, v: Site) -> Option<Rational> {
    let p = profile.p_exact(u.j)?;
    let dk = (u.k - v.k).abs();
    let dj = (u.j - v.j).abs();
    Some(match (dk, dj) {
        (0, 1) => p,
        (1, 0) => Rational::new(1, 2) - p,
        _ => Rational::zero(),
    })
}

fn neighbours(u: Site) -> [Site; 4] {
    [
        Site::new(u.k + 1, u.j),
        Site::new(u.k - 1, u.j),
        Site::new(u.k, u.j + 1),
        Site::new(u.k, u.j - 1),
    ]
}

/// Checks `pi_u p(u,v) = pi_v p(v,u)` with `pi(k, j) = 1/p_j` on every
/// directed edge inside `[-K, K]^2`.
pub fn detailed_balance_check(profile: &ProfileSpec, window: i64) -> bool {
    if profile.is_rational() {
        detailed_balance_check_with(profile, window, |s| {
            profile.p_exact(s.j).expect("rational").recip()
        })
    } else {
        detailed_balance_check_float(profile, window)
    }
}

/// Exact check against an arbitrary candidate measure.
pub fn detailed_balance_check_with(
    profile: &ProfileSpec,
    window: i64,
    measure: impl Fn(Site) -> Rational,
) -> bool {
    for k in -window..=window {
        for j in -window..=window {
            let u = Site::new(k, j);
            for v in neighbours(u) {
                if v.k.abs() > window || v.j.abs() > window {
                    continue;
                }
                let (Some(puv), Some(pvu)) =
                    (transition_exact(profile, u, v), transition_exact(profile, v, u))
                else {
                    return false;
                };
                if measure(u) * puv != measure(v) * pvu {
                    return false;
                }
            }
        }
    }
    true
}

fn detailed_balance_check_float(profile: &ProfileSpec, window: i64) -> bool {
    let prob = |u: Site, v: Site| -> f64 {
        if u.k == v.k {
            profile.p(u.j)
        } else {
            0.5 - profile.p(u.j)
        }
    };
    for k in -window..=window {
        for j in -window..=window {
            let u = Site::new(k, j);
            for v in neighbours(u) {
                if v.k.abs() > window || v.j.abs() > window {
                    continue;
                }
                let lhs = prob(u, v) / profile.p(u.j);
                let rhs = prob(v, u) / profile.p(v.j);
                if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(rhs.abs()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Exact conductance `a(u, v) = pi_u p(u, v)`.
pub fn conductance_exact(profile: &ProfileSpec, u: Site, v: Site) -> Option<Rational> {
    Some(profile.p_exact(u.j)?.recip() * transition_exact(profile, u, v)?)
}

/// Float conductance check used by the report printers.
pub fn conductance_matches_exact(profile: &ProfileSpec, u: Site, v: Site) -> bool {
    match conductance_exact(profile, u, v) {
        Some(c) => (ratio_to_f64(&c) - conductance(profile, u, v)).abs() < 1e-12,
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn constant_quarter() -> ProfileSpec {
        ProfileSpec::constant(r(1, 4)).unwrap()
    }

    #[test]
    fn terms_examples() {
        let t = nash_williams_terms(&constant_quarter(), 2);
        assert_eq!(t, vec![0.25, 1.0 / 12.0, 1.0 / 20.0]);
        assert_eq!(nash_williams_terms(&ProfileSpec::comb(), 1), vec![0.25, 0.125]);
    }

    #[test]
    fn power_tail_terms_decay_like_inverse_square() {
        let profile = ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap();
        let t = nash_williams_terms(&profile, 20_000);
        for k in [1_000usize, 5_000, 20_000] {
            let kk = k as f64;
            assert!((t[k] * 4.0 * kk * kk - 1.0).abs() < 2.0 / kk);
        }
    }

    #[test]
    fn analytic_verdicts() {
        let comb = classify(&ProfileSpec::comb(), 1000, DEFAULT_MARGIN).unwrap();
        assert_eq!(comb.verdict, Verdict::Recurrent);
        let c = classify(&constant_quarter(), 1000, DEFAULT_MARGIN).unwrap();
        assert_eq!(c.verdict, Verdict::Recurrent);
        assert!((c.fitted_growth_exponent - 1.0).abs() < 0.01);
        let pt = classify(&ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap(), 1000, 0.1).unwrap();
        assert_eq!(pt.verdict, Verdict::Transient);
        assert_eq!(pt.transience_exponent, Some(1.0));
        assert!((pt.fitted_growth_exponent - 2.0).abs() < 0.05);
    }

    #[test]
    fn small_window_is_rejected() {
        assert_eq!(
            classify(&ProfileSpec::comb(), 99, DEFAULT_MARGIN),
            Err(Error::WindowTooSmall(99))
        );
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let report = classify(&ProfileSpec::half_plane_half_comb(), 5000, 0.1).unwrap();
        let sums = &report.nash_williams_partial_sums;
        assert_eq!(sums.first().unwrap().0, 0);
        assert_eq!(sums.last().unwrap().0, 5000);
        for w in sums.windows(2) {
            assert!(w[0].0 < w[1].0);
            assert!(w[0].1 >= 0.0 && w[0].1 <= w[1].1);
        }
    }

    #[test]
    fn numeric_table_verdicts() {
        // Linear growth table: recurrent by the fit.
        let mut lin = BTreeMap::new();
        for j in -3000..=3000 {
            lin.insert(j, if j % 3 == 0 { r(1, 4) } else { r(1, 2) });
        }
        let report = classify(&ProfileSpec::table(lin, r(1, 2)).unwrap(), 1000, 0.1).unwrap();
        assert_eq!(report.verdict, Verdict::Recurrent);
        assert_eq!(report.rationale, "fitted-growth-linear");
    }

    #[test]
    fn constant_partial_sums_grow_harmonically() {
        // term_k = p / (2k + 1): the sum gains (p/2) ln 10 per decade.
        for p in [r(1, 4), r(1, 10), r(1, 3)] {
            let profile = ProfileSpec::constant(p).unwrap();
            let t = nash_williams_terms(&profile, 100_000);
            let gain: f64 = t[10_001..].iter().sum();
            let pf = ratio_to_f64(&p);
            let predicted = pf / 2.0 * libm::log(10.0);
            assert!((gain / predicted - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn detailed_balance_examples() {
        let comb = ProfileSpec::comb();
        let u = Site::new(0, 0);
        let v = Site::new(0, 1);
        assert_eq!(conductance_exact(&comb, u, v), Some(r(1, 1)));
        assert_eq!(conductance_exact(&comb, v, u), Some(r(1, 1)));
        assert!(detailed_balance_check(&comb, 50));
        assert!(detailed_balance_check(&ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap(), 30));
        let corrupted = detailed_balance_check_with(&comb, 50, |s| {
            let base = comb.p_exact(s.j).unwrap().recip();
            if s == Site::new(0, 1) {
                base + r(1, 1000)
            } else {
                base
            }
        });
        assert!(!corrupted);
    }

    #[test]
    fn conductance_invariants() {
        let profile = ProfileSpec::periodic(vec![r(1, 4), r(1, 3), r(1, 2)]).unwrap();
        for j in -5..5 {
            let u = Site::new(2, j);
            assert_eq!(conductance(&profile, u, Site::new(2, j + 1)), 1.0);
            assert_eq!(conductance(&profile, u, Site::new(2, j - 1)), 1.0);
            let h = 1.0 / (2.0 * profile.p(j)) - 1.0;
            assert_eq!(conductance(&profile, u, Site::new(3, j)), h);
            assert_eq!(conductance(&profile, u, Site::new(4, j)), 0.0);
            assert_eq!(conductance(&profile, u, Site::new(3, j + 1)), 0.0);
            assert!(conductance_matches_exact(&profile, u, Site::new(1, j)));
        }
    }
}
