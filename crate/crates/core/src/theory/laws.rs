//! Limit laws with evaluatable distribution functions.

use core::f64::consts::SQRT_2;

use super::quadrature::integrate;
use super::special::{normal_cdf, normal_pdf};
use crate::{Error, Result};

/// Absolute accuracy required of every quadrature-based CDF value.
pub const CDF_TOLERANCE: f64 = 1e-6;

// Folded-normal mass beyond this point is below 1e-30.
const FOLDED_CUTOFF: f64 = 12.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitLaw {
    /// Unit exponential: normalized origin local time of a periodic walk.
    Exponential1,
    StdNormal,
    ScaledNormal { variance: f64 },
    /// `2 |U| sqrt(|V|)`, `U, V` independent standard normals: comb origin
    /// local time over `N^{1/4}`.
    TwoAbsUrootV,
    /// `U sqrt(|Z|)`: comb horizontal coordinate over `N^{1/4}`.
    UrootAbsZ,
}

impl LimitLaw {
    pub fn name(&self) -> &'static str {
        match self {
            LimitLaw::Exponential1 => "exponential(1)",
            LimitLaw::StdNormal => "normal(0,1)",
            LimitLaw::ScaledNormal { .. } => "normal(0,v)",
            LimitLaw::TwoAbsUrootV => "2|U|sqrt|V|",
            LimitLaw::UrootAbsZ => "U sqrt|Z|",
        }
    }

    /// The distributional identity the law stands for.
    pub fn identity(&self) -> &'static str {
        match self {
            LimitLaw::Exponential1 => "Xi((0,0),N) / g(N) -> Exp(1) (Darling-Kac)",
            LimitLaw::StdNormal => "C2(N) / sqrt(N) -> W2(1) on the comb",
            LimitLaw::ScaledNormal { .. } => {
                "(C1, C2)(N) / sqrt(N) -> (W1(1 - 1/gamma), W2(1/gamma))"
            }
            LimitLaw::TwoAbsUrootV => "Xi((0,0),N) / N^{1/4} -> 2 eta1(0, eta2(0,1)) = 2|U|sqrt|V|",
            LimitLaw::UrootAbsZ => "C1(N) / N^{1/4} -> W1(eta2(0,1)) = U sqrt|Z|",
        }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain("cdf argument is NaN"));
        }
        match *self {
            LimitLaw::Exponential1 => Ok(if x <= 0.0 { 0.0 } else { -libm::expm1(-x) }),
            LimitLaw::StdNormal => Ok(normal_cdf(x)),
            LimitLaw::ScaledNormal { variance } => {
                if !(variance > 0.0) {
                    return Err(Error::Domain("variance must be positive"));
                }
                Ok(normal_cdf(x / libm::sqrt(variance)))
            }
            LimitLaw::TwoAbsUrootV => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                if x.is_infinite() {
                    return Ok(1.0);
                }
                // P(|U| <= x / (2 sqrt v)) = erf(x / (2 sqrt(2 v))), v folded normal.
                let f = |v: f64| {
                    let tail = if v <= 0.0 {
                        1.0
                    } else {
                        libm::erf(x / (2.0 * SQRT_2 * libm::sqrt(v)))
                    };
                    2.0 * normal_pdf(v) * tail
                };
                let value = integrate(f, 0.0, FOLDED_CUTOFF, CDF_TOLERANCE * 1e-2)?;
                Ok(value.clamp(0.0, 1.0))
            }
            LimitLaw::UrootAbsZ => {
                if x == 0.0 {
                    return Ok(0.5);
                }
                if x.is_infinite() {
                    return Ok(if x > 0.0 { 1.0 } else { 0.0 });
                }
                let a = x.abs();
                // P(|U| sqrt z <= a) over the folded normal z.
                let f = |z: f64| {
                    let inner = if z <= 0.0 {
                        1.0
                    } else {
                        normal_cdf(a / libm::sqrt(z))
                    };
                    2.0 * normal_pdf(z) * inner
                };
                let upper = integrate(f, 0.0, FOLDED_CUTOFF, CDF_TOLERANCE * 1e-2)?.clamp(0.0, 1.0);
                Ok(if x > 0.0 { upper } else { 1.0 - upper })
            }
        }
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain("quantile level must lie in (0, 1)"));
        }
        let (mut lo, mut hi) = (-1.0, 1.0);
        while self.cdf(lo)? > q {
            lo *= 2.0;
        }
        while self.cdf(hi)? < q {
            hi *= 2.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < q {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-10 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
