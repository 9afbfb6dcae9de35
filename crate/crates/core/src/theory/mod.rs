//! Closed-form predictions the simulations are checked against.
//!
//! All asymptotic formulas are leading order only. They are compared with
//! simulation at several `N` so that the trend is visible.

mod laws;
pub mod quadrature;
pub mod special;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use laws::{LimitLaw, CDF_TOLERANCE};

use crate::{Error, Result};

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(Error::GammaTooSmall(gamma))
    }
}

fn check_p0(p0: f64) -> Result<()> {
    if p0 > 0.0 && p0 <= 0.5 {
        Ok(())
    } else {
        Err(Error::Domain("p0 must lie in (0, 1/2]"))
    }
}

/// `P(C(2N) = (0,0)) ~ 1 / (4 pi N p0 sqrt(gamma - 1))` for periodic profiles.
pub fn periodic_return_prob(gamma: f64, p0: f64, n: u64) -> Result<f64> {
    check_gamma(gamma)?;
    check_p0(p0)?;
    if n < 1 {
        return Err(Error::Domain("N >= 1"));
    }
    Ok(1.0 / (4.0 * PI * n as f64 * p0 * libm::sqrt(gamma - 1.0)))
}

/// Truncated Green function `g(N) ~ log N / (4 p0 pi sqrt(gamma - 1))`.
pub fn green_truncated(gamma: f64, p0: f64, n: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_p0(p0)?;
    if !(n >= 2.0) {
        return Err(Error::Domain("N >= 2"));
    }
    Ok(libm::log(n) / (4.0 * p0 * PI * libm::sqrt(gamma - 1.0)))
}

/// Comb return probability `P(C(2N) = (0,0)) ~ sqrt 2 / (Gamma(1/4) N^{3/4})`.
pub fn comb_return_prob(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("N >= 1"));
    }
    Ok(core::f64::consts::SQRT_2 / (special::gamma_quarter() * libm::pow(n as f64, 0.75)))
}

/// Limit variances of `(C1(N), C2(N)) / sqrt(N)` when `alpha = 1`:
/// `(1 - 1/gamma, 1/gamma)`.
pub fn marginal_limit_variances(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma.is_finite() && gamma >= 1.0) {
        return Err(Error::Domain("gamma >= 1"));
    }
    Ok((1.0 - 1.0 / gamma, 1.0 / gamma))
}

/// `E R(N) ~ (2 pi sqrt(gamma - 1) / gamma) N / log N` for periodic profiles.
pub fn expected_range_periodic(gamma: f64, n: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(n >= 2.0) {
        return Err(Error::Domain("N >= 2"));
    }
    Ok(2.0 * PI * libm::sqrt(gamma - 1.0) / gamma * n / libm::log(n))
}

/// A named leading-order formula in `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AsymptoticFormula {
    PeriodicReturn { gamma: f64, p0: f64 },
    GreenTruncated { gamma: f64, p0: f64 },
    CombReturn,
    ExpectedRange { gamma: f64 },
}

impl AsymptoticFormula {
    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticFormula::PeriodicReturn { .. } => "periodic-return-prob",
            AsymptoticFormula::GreenTruncated { .. } => "green-truncated",
            AsymptoticFormula::CombReturn => "comb-return-prob",
            AsymptoticFormula::ExpectedRange { .. } => "expected-range-periodic",
        }
    }

    pub fn validity(&self) -> &'static str {
        match self {
            AsymptoticFormula::PeriodicReturn { .. } => {
                "leading order as N -> infinity; evaluated at half-time N for C(2N)"
            }
            AsymptoticFormula::GreenTruncated { .. } => {
                "leading order; the additive constant is unknown"
            }
            AsymptoticFormula::CombReturn => "leading order for C(2N) on the comb",
            AsymptoticFormula::ExpectedRange { .. } => {
                "leading order; relative corrections decay like 1/log N"
            }
        }
    }

    pub fn eval(&self, n: f64) -> Result<f64> {
        match *self {
            AsymptoticFormula::PeriodicReturn { gamma, p0 } => {
                periodic_return_prob(gamma, p0, n as u64)
            }
            AsymptoticFormula::GreenTruncated { gamma, p0 } => green_truncated(gamma, p0, n),
            AsymptoticFormula::CombReturn => comb_return_prob(n as u64),
            AsymptoticFormula::ExpectedRange { gamma } => expected_range_periodic(gamma, n),
        }
    }
}

/// The growth regimes of the profile family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Case {
    /// `alpha = 0`, including the comb.
    Comb,
    /// `0 < alpha < 1`.
    Sublinear(f64),
    /// `alpha = 1`, including periodic profiles.
    Linear,
    /// `alpha > 1` (transient).
    Superlinear(f64),
    /// Half-plane half-comb.
    HalfPlaneHalfComb,
}

impl Case {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Domain("alpha >= 0"));
        }
        Ok(if alpha == 0.0 {
            Case::Comb
        } else if alpha < 1.0 {
            Case::Sublinear(alpha)
        } else if alpha == 1.0 {
            Case::Linear
        } else {
            Case::Superlinear(alpha)
        })
    }

    /// Accepts `comb`, `periodic`, `hphc`, or `alpha=<value>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "comb" => Ok(Case::Comb),
            "periodic" | "linear" => Ok(Case::Linear),
            "hphc" => Ok(Case::HalfPlaneHalfComb),
            _ => {
                let alpha = s
                    .strip_prefix("alpha=")
                    .and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownCase(String::from(s)))?;
                Case::from_alpha(alpha)
            }
        }
    }
}

/// Predicted log-log slopes `(observable, exponent)` for a regime.
pub fn scaling_exponents(case: Case) -> Vec<(&'static str, f64)> {
    match case {
        Case::Comb => vec![("C1", 0.25), ("C2", 0.5), ("H_N", 0.5)],
        Case::Sublinear(a) => vec![("H_N", (1.0 + a) / 2.0), ("C1", (1.0 + a) / 4.0), ("C2", 0.5)],
        Case::Linear => vec![("C1", 0.5), ("C2", 0.5), ("H_N", 1.0)],
        Case::Superlinear(a) => vec![("C2", 1.0 / (1.0 + a)), ("C1", 0.5), ("V_N", 2.0 / (1.0 + a))],
        Case::HalfPlaneHalfComb => vec![("C1", 0.5), ("C2", 0.5)],
    }
}

/// Almost-sure limsup/liminf constants, exported for reference only: they
/// are not checkable by finite simulation.
pub fn lil_constants(case: Case, gamma: Option<f64>, p0: Option<f64>) -> Result<Vec<(&'static str, f64)>> {
    let two = 2.0_f64;
    let three = 3.0_f64;
    Ok(match case {
        Case::Comb => vec![
            (
                "limsup C1 / (N^{1/4} (log log N)^{3/4})",
                libm::pow(two, 1.25) * libm::pow(three, -0.75),
            ),
            ("limsup C2 / sqrt(2 N log log N)", 1.0),
            (
                "limsup Xi((x,0),N) / (N^{1/4} (log log N)^{3/4})",
                libm::pow(two, 2.25) * libm::pow(three, -0.75),
            ),
            (
                "limsup Xi((x,y),N) / (N^{1/4} (log log N)^{3/4}), y != 0",
                libm::pow(two, 1.25) * libm::pow(three, -0.75),
            ),
        ],
        Case::Linear => {
            let g = gamma.ok_or(Error::Domain("linear case needs gamma"))?;
            check_gamma(g)?;
            let mut out = vec![
                ("limsup C1 / sqrt(N log log N)", libm::sqrt(2.0 * (g - 1.0) / g)),
                ("limsup C2 / sqrt(N log log N)", libm::sqrt(2.0 / g)),
            ];
            if let Some(p0) = p0 {
                check_p0(p0)?;
                out.push((
                    "limsup Xi((0,0),N) / (log N log log log N)",
                    1.0 / (4.0 * p0 * PI * libm::sqrt(g - 1.0)),
                ));
            }
            out
        }
        Case::HalfPlaneHalfComb => vec![
            ("limsup C1 / sqrt(N log log N)", 1.0),
            ("liminf C1 / sqrt(N log log N)", -1.0),
            ("limsup C2 / sqrt(N log log N)", 1.0),
            ("liminf C2 / sqrt(N log log N)", -libm::sqrt(2.0)),
        ],
        Case::Sublinear(_) | Case::Superlinear(_) => vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_return_examples() {
        let v = periodic_return_prob(2.0, 0.25, 100).unwrap();
        assert!((v - 0.003_183_098_861_837_907).abs() < 1e-15);
        for n in [1, 7, 100, 12345] {
            let v = periodic_return_prob(2.0, 0.25, n).unwrap();
            assert!((v - 1.0 / (PI * n as f64)).abs() <= 1e-15 * v);
            let w = periodic_return_prob(2.0, 0.25, 2 * n).unwrap();
            assert!((w * 2.0 - v).abs() <= 1e-15 * v);
        }
        assert_eq!(periodic_return_prob(1.0, 0.25, 10), Err(Error::GammaTooSmall(1.0)));
    }

    #[test]
    fn green_examples() {
        let g = green_truncated(2.0, 0.25, libm::exp(PI)).unwrap();
        assert!((g - 1.0).abs() < 1e-14);
        let n = 12345.0;
        let a = green_truncated(1.5, 0.25, n).unwrap();
        let b = green_truncated(1.5, 0.25, n * n).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
        let g = green_truncated(1.5, 0.25, 1e6).unwrap();
        assert!((g - 6.219_164_785_688).abs() < 1e-9);
    }

    #[test]
    fn comb_return_examples() {
        let one = comb_return_prob(1).unwrap();
        assert!((one - 0.390_06).abs() < 1e-5);
        let sixteen = comb_return_prob(16).unwrap();
        assert!((sixteen / one - 0.125).abs() < 1e-14);
        let mut prev = one;
        for n in 2..100 {
            let v = comb_return_prob(n).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn variance_examples() {
        assert_eq!(marginal_limit_variances(2.0).unwrap(), (0.5, 0.5));
        let (a, b) = marginal_limit_variances(1.5).unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-15 && (b - 2.0 / 3.0).abs() < 1e-15);
        for g in [1.0, 1.1, 2.0, 3.7, 50.0] {
            let (a, b) = marginal_limit_variances(g).unwrap();
            assert!((a + b - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn range_examples() {
        let r = expected_range_periodic(2.0, 1e6).unwrap();
        assert!((r - 227_396.0).abs() < 1.0);
        for n in [10.0, 1e3, 1e8] {
            let r = expected_range_periodic(2.0, n).unwrap();
            assert!((r - PI * n / libm::log(n)).abs() < 1e-9 * r);
        }
        assert!(expected_range_periodic(1e12, 1e6).unwrap() < 1.0);
    }

    #[test]
    fn exponent_table() {
        let comb = scaling_exponents(Case::parse("comb").unwrap());
        assert!(comb.contains(&("C1", 0.25)));
        let half = scaling_exponents(Case::parse("alpha=0.5").unwrap());
        assert!(half.contains(&("H_N", 0.75)));
        let two = scaling_exponents(Case::parse("alpha=2").unwrap());
        assert!(two.iter().any(|(n, e)| *n == "C2" && (e - 1.0 / 3.0).abs() < 1e-15));
        assert!(matches!(Case::parse("saddle"), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn lil_table() {
        let comb = lil_constants(Case::Comb, None, None).unwrap();
        assert_eq!(comb[0].1, libm::pow(2.0, 1.25) / libm::pow(3.0, 0.75));
        assert_eq!(comb[2].1, libm::pow(2.0, 2.25) / libm::pow(3.0, 0.75));
        let lin = lil_constants(Case::Linear, Some(1.5), Some(0.25)).unwrap();
        assert!((lin[1].1 - libm::sqrt(2.0 / 1.5)).abs() < 1e-15);
        assert_eq!(lin.len(), 3);
        assert!(lil_constants(Case::Linear, None, None).is_err());
    }
}
