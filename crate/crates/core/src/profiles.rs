//! Step-probability profiles `p_j`.
//!
//! A profile assigns to every row `j` the probability `p_j` of moving to each
//! vertical neighbour. Every profile satisfies `0 < p_j <= 1/2` and has at
//! least one row with `p_j < 1/2`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact probabilities for the rational profile kinds.
pub type Rational = Ratio<i64>;

/// The structured families a profile can be built from.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    Constant {
        p: Rational,
    },
    /// `p_j = values[j mod L]` with the nonnegative remainder.
    Periodic {
        values: Vec<Rational>,
    },
    /// `p_0 = 1/4`, `p_j = 1/2` otherwise.
    Comb,
    /// `p_j = 1/4` for `j >= 0`, `p_j = 1/2` for `j < 0`.
    HalfPlaneHalfComb,
    /// `f(j) = (gamma - 1)(|j|^alpha - (|j| - 1)^alpha)` off the axis (with the
    /// second power read as zero at `|j| = 1`), `p_j = 1 / (2 (1 + f(j)))`,
    /// and a free `p_0`.
    PowerTail {
        gamma: f64,
        alpha: f64,
        p0: f64,
    },
    Table {
        entries: BTreeMap<i64, Rational>,
        default: Rational,
    },
}

/// A validated, immutable profile.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSpec {
    kind: ProfileKind,
    // Table rows with p < 1/2, for locating runs of p = 1/2.
    sub_half_rows: BTreeSet<i64>,
}

pub(crate) fn half() -> Rational {
    Rational::new(1, 2)
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn check_rational(p: &Rational) -> Result<()> {
    if *p <= Rational::zero() || *p > half() {
        return Err(Error::InvalidProbability {
            value: format!("{p}"),
        });
    }
    Ok(())
}

fn check_float(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidProbability {
            value: format!("{p}"),
        });
    }
    Ok(())
}

impl ProfileSpec {
    pub fn new(kind: ProfileKind) -> Result<Self> {
        let mut sub_half_rows = BTreeSet::new();
        match &kind {
            ProfileKind::Constant { p } => {
                check_rational(p)?;
                if *p == half() {
                    return Err(Error::NoSubHalfLevel);
                }
            }
            ProfileKind::Periodic { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidProfile("periodic profile needs L >= 1 values"));
                }
                for p in values {
                    check_rational(p)?;
                }
                if values.iter().all(|p| *p == half()) {
                    return Err(Error::NoSubHalfLevel);
                }
            }
            ProfileKind::Comb | ProfileKind::HalfPlaneHalfComb => {}
            ProfileKind::PowerTail { gamma, alpha, p0 } => {
                if !(gamma.is_finite() && *gamma > 1.0) {
                    return Err(Error::InvalidProfile("power tail needs gamma > 1"));
                }
                if !(alpha.is_finite() && *alpha >= 0.0) {
                    return Err(Error::InvalidProfile("power tail needs alpha >= 0"));
                }
                check_float(*p0)?;
            }
            ProfileKind::Table { entries, default } => {
                check_rational(default)?;
                for p in entries.values() {
                    check_rational(p)?;
                }
                sub_half_rows = entries
                    .iter()
                    .filter(|(_, p)| **p < half())
                    .map(|(j, _)| *j)
                    .collect();
                if *default == half() && sub_half_rows.is_empty() {
                    return Err(Error::NoSubHalfLevel);
                }
            }
        }
        Ok(Self {
            kind,
            sub_half_rows,
        })
    }

    pub fn constant(p: Rational) -> Result<Self> {
        Self::new(ProfileKind::Constant { p })
    }

    pub fn periodic(values: Vec<Rational>) -> Result<Self> {
        Self::new(ProfileKind::Periodic { values })
    }

    pub fn comb() -> Self {
        Self::new(ProfileKind::Comb).expect("comb is valid")
    }

    pub fn half_plane_half_comb() -> Self {
        Self::new(ProfileKind::HalfPlaneHalfComb).expect("HPHC is valid")
    }

    pub fn power_tail(gamma: f64, alpha: f64, p0: f64) -> Result<Self> {
        Self::new(ProfileKind::PowerTail { gamma, alpha, p0 })
    }

    pub fn table(entries: BTreeMap<i64, Rational>, default: Rational) -> Result<Self> {
        Self::new(ProfileKind::Table { entries, default })
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// True when every `p_j` is an exact rational.
    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, ProfileKind::PowerTail { .. })
    }

    /// `p_j` exactly, when the kind is rational.
    pub fn p_exact(&self, j: i64) -> Option<Rational> {
        match &self.kind {
            ProfileKind::Constant { p } => Some(*p),
            ProfileKind::Periodic { values } => {
                let len = values.len() as i64;
                Some(values[j.rem_euclid(len) as usize])
            }
            ProfileKind::Comb => Some(if j == 0 {
                Rational::new(1, 4)
            } else {
                half()
            }),
            ProfileKind::HalfPlaneHalfComb => Some(if j >= 0 {
                Rational::new(1, 4)
            } else {
                half()
            }),
            ProfileKind::PowerTail { .. } => None,
            ProfileKind::Table { entries, default } => {
                Some(*entries.get(&j).unwrap_or(default))
            }
        }
    }

    /// `p_j` as a float.
    pub fn p(&self, j: i64) -> f64 {
        match &self.kind {
            ProfileKind::PowerTail { p0, .. } if j == 0 => *p0,
            ProfileKind::PowerTail { .. } => 1.0 / (2.0 * (1.0 + self.drift_weight(j))),
            _ => ratio_to_f64(&self.p_exact(j).expect("rational kind")),
        }
    }

    /// `f(j) = (1 - 2 p_j) / (2 p_j)`, the mean horizontal burst length at row `j`.
    pub fn drift_weight(&self, j: i64) -> f64 {
        match &self.kind {
            ProfileKind::PowerTail { gamma, alpha, p0 } => {
                if j == 0 {
                    (1.0 - 2.0 * p0) / (2.0 * p0)
                } else {
                    (gamma - 1.0) * power_increment(j.unsigned_abs() as f64, *alpha)
                }
            }
            _ => ratio_to_f64(&self.drift_weight_exact(j).expect("rational kind")),
        }
    }

    pub fn drift_weight_exact(&self, j: i64) -> Option<Rational> {
        self.p_exact(j).map(|p| (Rational::one() - p * 2) / (p * 2))
    }

    /// `gamma = (sum_{j<L} 1/p_j) / (2L)` for periodic (and constant) profiles.
    pub fn gamma_periodic(&self) -> Result<f64> {
        let values = match &self.kind {
            ProfileKind::Periodic { values } => values.clone(),
            ProfileKind::Constant { p } => alloc::vec![*p],
            _ => return Err(Error::NotPeriodic),
        };
        let sum: Rational = values.iter().map(|p| p.recip()).sum();
        Ok(ratio_to_f64(&(sum / (2 * values.len() as i64))))
    }

    /// `sum_{j=-k}^{k} 1/p_j`.
    pub fn inverse_p_block_sum(&self, k: u64) -> f64 {
        let k = k as i64;
        (-k..=k).map(|j| 1.0 / self.p(j)).sum()
    }

    /// The same sum in exact arithmetic (rational kinds only).
    pub fn inverse_p_block_sum_exact(&self, k: u64) -> Option<BigRational> {
        let k = k as i64;
        let mut acc = BigRational::zero();
        for j in -k..=k {
            acc += to_big(&self.p_exact(j)?.recip());
        }
        Some(acc)
    }

    /// Block sums for every `k` in `0..=k_max`, computed incrementally.
    pub fn inverse_p_block_sums(&self, k_max: u64) -> Vec<f64> {
        let mut out = Vec::with_capacity(k_max as usize + 1);
        let mut acc = 1.0 / self.p(0);
        out.push(acc);
        for k in 1..=k_max as i64 {
            acc += 1.0 / self.p(k) + 1.0 / self.p(-k);
            out.push(acc);
        }
        out
    }

    /// True when `p_j = 1/2`, so the walk can only move vertically at row `j`.
    pub fn is_half(&self, j: i64) -> bool {
        match &self.kind {
            ProfileKind::PowerTail { p0, .. } => {
                if j == 0 {
                    *p0 == 0.5
                } else {
                    self.drift_weight(j) == 0.0
                }
            }
            _ => self.p_exact(j).expect("rational kind") == half(),
        }
    }

    /// A radius `r` (at most `cap`) such that every row in `[j - r, j + r]`
    /// has `p = 1/2`. Zero when `p_j < 1/2`. Never overestimates.
    pub fn half_radius(&self, j: i64, cap: u64) -> u64 {
        if !self.is_half(j) {
            return 0;
        }
        let r = match &self.kind {
            ProfileKind::Constant { .. } => 0,
            ProfileKind::Comb => j.unsigned_abs() - 1,
            ProfileKind::HalfPlaneHalfComb => j.unsigned_abs() - 1,
            ProfileKind::PowerTail { gamma, alpha, .. } => {
                // Only alpha = 0 has half rows: f vanishes for |j| >= 2.
                if *gamma > 1.0 && *alpha == 0.0 {
                    j.unsigned_abs().saturating_sub(2)
                } else {
                    0
                }
            }
            ProfileKind::Periodic { values } => {
                let limit = (values.len() as u64).min(cap);
                let mut r = 0;
                while r < limit
                    && self.is_half(j + r as i64 + 1)
                    && self.is_half(j - r as i64 - 1)
                {
                    r += 1;
                }
                r
            }
            ProfileKind::Table { default, .. } => {
                if *default != half() {
                    0
                } else {
                    let right = self.sub_half_rows.range(j..).next().map(|x| x - j);
                    let left = self.sub_half_rows.range(..=j).next_back().map(|x| j - x);
                    let nearest = match (left, right) {
                        (Some(a), Some(b)) => a.min(b),
                        (Some(a), None) => a,
                        (None, Some(b)) => b,
                        (None, None) => unreachable!("validated table has a sub-half row"),
                    };
                    nearest as u64 - 1
                }
            }
        };
        r.min(cap)
    }

    /// Short human-readable identifier.
    pub fn label(&self) -> String {
        match &self.kind {
            ProfileKind::Constant { p } => format!("constant({p})"),
            ProfileKind::Periodic { values } => {
                let parts: Vec<String> = values.iter().map(|p| format!("{p}")).collect();
                format!("periodic({})", parts.join(","))
            }
            ProfileKind::Comb => "comb".into(),
            ProfileKind::HalfPlaneHalfComb => "hphc".into(),
            ProfileKind::PowerTail { gamma, alpha, p0 } => {
                format!("power-tail(gamma={gamma},alpha={alpha},p0={p0})")
            }
            ProfileKind::Table { entries, default } => {
                format!("table({} rows,default={default})", entries.len())
            }
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `m^alpha - (m-1)^alpha` for `m >= 1`, with the second term taken as zero
/// at `m = 1` (so `alpha = 0` gives 1 there).
fn power_increment(m: f64, alpha: f64) -> f64 {
    if m == 1.0 {
        return 1.0;
    }
    // m^a (1 - (1 - 1/m)^a) without cancellation.
    -libm::pow(m, alpha) * libm::expm1(alpha * libm::log1p(-1.0 / m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn bundled() -> Vec<ProfileSpec> {
        let mut table = BTreeMap::new();
        table.insert(-2, r(1, 3));
        table.insert(0, r(1, 10));
        table.insert(5, r(1, 4));
        vec![
            ProfileSpec::constant(r(1, 4)).unwrap(),
            ProfileSpec::constant(r(1, 10)).unwrap(),
            ProfileSpec::periodic(vec![r(1, 4), r(1, 2)]).unwrap(),
            ProfileSpec::periodic(vec![r(1, 2), r(1, 2), r(1, 5)]).unwrap(),
            ProfileSpec::comb(),
            ProfileSpec::half_plane_half_comb(),
            ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap(),
            ProfileSpec::power_tail(2.0, 0.5, 0.25).unwrap(),
            ProfileSpec::power_tail(1.5, 0.0, 0.3).unwrap(),
            ProfileSpec::table(table.clone(), r(1, 2)).unwrap(),
            ProfileSpec::table(table, r(2, 5)).unwrap(),
        ]
    }

    #[test]
    fn comb_values() {
        let comb = ProfileSpec::comb();
        assert_eq!(comb.p(0), 0.25);
        assert_eq!(comb.p(7), 0.5);
        assert_eq!(comb.p_exact(-7), Some(r(1, 2)));
    }

    #[test]
    fn periodic_negative_index() {
        let p = ProfileSpec::periodic(vec![r(1, 4), r(1, 2)]).unwrap();
        assert_eq!(p.p_exact(-3), Some(r(1, 2)));
        assert_eq!(p.p_exact(-4), Some(r(1, 4)));
    }

    #[test]
    fn hphc_values() {
        let p = ProfileSpec::half_plane_half_comb();
        assert_eq!(p.p_exact(-1), Some(r(1, 2)));
        assert_eq!(p.p_exact(0), Some(r(1, 4)));
        assert_eq!(p.p_exact(12), Some(r(1, 4)));
    }

    #[test]
    fn drift_weight_examples() {
        assert_eq!(ProfileSpec::constant(r(1, 4)).unwrap().drift_weight(3), 1.0);
        assert_eq!(ProfileSpec::comb().drift_weight(3), 0.0);
        assert_eq!(ProfileSpec::constant(r(1, 10)).unwrap().drift_weight(0), 4.0);
    }

    #[test]
    fn gamma_periodic_examples() {
        assert_eq!(ProfileSpec::constant(r(1, 4)).unwrap().gamma_periodic(), Ok(2.0));
        let p = ProfileSpec::periodic(vec![r(1, 4), r(1, 2)]).unwrap();
        assert_eq!(p.gamma_periodic(), Ok(1.5));
        assert_eq!(ProfileSpec::comb().gamma_periodic(), Err(Error::NotPeriodic));
    }

    #[test]
    fn all_half_is_rejected() {
        assert_eq!(
            ProfileSpec::periodic(vec![r(1, 2)]),
            Err(Error::NoSubHalfLevel)
        );
        assert_eq!(ProfileSpec::constant(r(1, 2)), Err(Error::NoSubHalfLevel));
        assert_eq!(
            ProfileSpec::table(BTreeMap::new(), r(1, 2)),
            Err(Error::NoSubHalfLevel)
        );
        assert!(matches!(
            ProfileSpec::constant(r(3, 5)),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(ProfileSpec::power_tail(1.0, 1.0, 0.25).is_err());
        assert!(ProfileSpec::power_tail(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn block_sum_examples() {
        assert_eq!(ProfileSpec::constant(r(1, 4)).unwrap().inverse_p_block_sum(1), 12.0);
        assert_eq!(ProfileSpec::comb().inverse_p_block_sum(0), 4.0);
        assert_eq!(ProfileSpec::comb().inverse_p_block_sum(2), 12.0);
    }

    #[test]
    fn probabilities_in_range_and_drift_identity() {
        for profile in bundled() {
            for j in -10_000..=10_000 {
                let p = profile.p(j);
                assert!(p > 0.0 && p <= 0.5, "{profile} at {j}: {p}");
                if let Some(pe) = profile.p_exact(j) {
                    let f = profile.drift_weight_exact(j).unwrap();
                    assert_eq!(f, (Rational::one() - pe * 2) / (pe * 2));
                } else {
                    let f = profile.drift_weight(j);
                    assert!((f - (1.0 - 2.0 * p) / (2.0 * p)).abs() <= 1e-12 * (1.0 + f));
                }
            }
        }
    }

    #[test]
    fn block_sum_identity_exact() {
        for profile in bundled().into_iter().filter(|p| p.is_rational()) {
            for k in 0..40u64 {
                let lhs = profile.inverse_p_block_sum_exact(k).unwrap();
                let ki = k as i64;
                let mut b = BigRational::zero();
                let mut c = BigRational::zero();
                for j in 1..=ki {
                    b += to_big(&profile.drift_weight_exact(j).unwrap());
                    c += to_big(&profile.drift_weight_exact(-j).unwrap());
                }
                let f0 = to_big(&profile.drift_weight_exact(0).unwrap());
                let two = BigRational::from_integer(BigInt::from(2));
                let rhs = BigRational::from_integer(BigInt::from(4 * ki + 2)) + two * (b + c + f0);
                assert_eq!(lhs, rhs, "{profile} k={k}");
            }
        }
    }

    #[test]
    fn block_sum_identity_power_tail() {
        for profile in bundled().into_iter().filter(|p| !p.is_rational()) {
            let sums = profile.inverse_p_block_sums(500);
            let mut bc = 0.0;
            for k in 0..=500i64 {
                if k > 0 {
                    bc += profile.drift_weight(k) + profile.drift_weight(-k);
                }
                let rhs = (4 * k + 2) as f64 + 2.0 * (bc + profile.drift_weight(0));
                let lhs = sums[k as usize];
                assert!((lhs - rhs).abs() <= 1e-9 * rhs, "{profile} k={k}");
                assert!((profile.inverse_p_block_sum(k as u64) - lhs).abs() <= 1e-9 * lhs);
            }
        }
    }

    #[test]
    fn power_tail_partial_sums_follow_the_power() {
        for (gamma, alpha) in [(2.0, 2.0), (2.0, 0.5), (1.5, 1.0), (3.0, 1.3), (2.0, 0.0)] {
            let profile = ProfileSpec::power_tail(gamma, alpha, 0.25).unwrap();
            let mut b = 0.0;
            let mut c = 0.0;
            for k in 1..=20_000i64 {
                b += profile.drift_weight(k);
                c += profile.drift_weight(-k);
                if k >= 1000 {
                    let target = (gamma - 1.0) * libm::pow(k as f64, alpha);
                    assert!((b / target - 1.0).abs() <= 0.02, "gamma={gamma} alpha={alpha} k={k}");
                    assert!((c / target - 1.0).abs() <= 0.02);
                }
            }
        }
    }

    #[test]
    fn periodicity() {
        let p = ProfileSpec::periodic(vec![r(1, 4), r(1, 3), r(1, 2)]).unwrap();
        for j in -300..300 {
            assert_eq!(p.p_exact(j), p.p_exact(j + 3));
        }
    }

    #[test]
    fn half_radius_never_overestimates() {
        for profile in bundled() {
            for j in -200..=200i64 {
                let r = profile.half_radius(j, 64) as i64;
                if r == 0 {
                    continue;
                }
                for i in j - r..=j + r {
                    assert!(profile.is_half(i), "{profile} j={j} r={r} bad row {i}");
                }
            }
        }
        assert_eq!(ProfileSpec::comb().half_radius(100, 1000), 99);
        assert_eq!(ProfileSpec::comb().half_radius(100, 64), 64);
        assert_eq!(ProfileSpec::half_plane_half_comb().half_radius(-10, 64), 9);
        assert_eq!(ProfileSpec::half_plane_half_comb().half_radius(10, 64), 0);
    }
}
