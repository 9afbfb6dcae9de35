//! Per-row sampling laws, precomputed once per profile and shared by replicas.

use alloc::vec::Vec;

use rand_core::RngCore;

use super::rng::Bits;
use crate::profiles::{ratio_to_f64, ProfileSpec, Rational};

/// Macro steps through rows with `p = 1/2` never look further than this.
pub(crate) const QUIET_CAP: u64 = 64;

/// How the direct chain decides "vertical" (probability `2 p_j`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum VerticalChoice {
    Always,
    /// `2 p_j = below / 2^bits` exactly.
    Dyadic { bits: u32, below: u64 },
    /// Vertical iff a uniform word is `< threshold` (`threshold / 2^64 ~ 2 p_j`).
    Threshold(u64),
}

/// Law of the horizontal burst length, `P(G = k) = 2p (1 - 2p)^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum BurstLaw {
    Zero,
    HalfGeometric,
    Inversion { q: f64, inv_ln_q: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct LevelLaw {
    pub vertical: VerticalChoice,
    pub burst: BurstLaw,
    /// Every row within this distance has `p = 1/2`.
    pub quiet: u32,
}

impl LevelLaw {
    fn new(profile: &ProfileSpec, j: i64) -> Self {
        let quiet = profile.half_radius(j, QUIET_CAP) as u32;
        match profile.p_exact(j) {
            Some(p) => Self::from_rational(p * 2, quiet),
            None => Self::from_float(2.0 * profile.p(j), quiet),
        }
    }

    fn from_rational(two_p: Rational, quiet: u32) -> Self {
        let one = Rational::new(1, 1);
        if two_p == one {
            return Self {
                vertical: VerticalChoice::Always,
                burst: BurstLaw::Zero,
                quiet,
            };
        }
        let (num, den) = (*two_p.numer() as u64, *two_p.denom() as u64);
        let vertical = if den.is_power_of_two() && den.trailing_zeros() <= 32 {
            VerticalChoice::Dyadic {
                bits: den.trailing_zeros(),
                below: num,
            }
        } else {
            VerticalChoice::Threshold((((num as u128) << 64) / den as u128) as u64)
        };
        let burst = if two_p == Rational::new(1, 2) {
            BurstLaw::HalfGeometric
        } else {
            let q = ratio_to_f64(&(one - two_p));
            BurstLaw::Inversion {
                q,
                inv_ln_q: 1.0 / libm::log(q),
            }
        };
        Self {
            vertical,
            burst,
            quiet,
        }
    }

    fn from_float(two_p: f64, quiet: u32) -> Self {
        if two_p >= 1.0 {
            return Self {
                vertical: VerticalChoice::Always,
                burst: BurstLaw::Zero,
                quiet,
            };
        }
        let q = 1.0 - two_p;
        Self {
            vertical: VerticalChoice::Threshold((two_p * 18_446_744_073_709_551_616.0) as u64),
            burst: BurstLaw::Inversion {
                q,
                inv_ln_q: 1.0 / libm::log(q),
            },
            quiet,
        }
    }

    #[inline]
    pub fn is_vertical<R: RngCore>(&self, bits: &mut Bits<R>) -> bool {
        match self.vertical {
            VerticalChoice::Always => true,
            VerticalChoice::Dyadic { bits: b, below } => bits.bits(b) < below,
            VerticalChoice::Threshold(t) => bits.word() < t,
        }
    }

    #[inline]
    pub fn burst<R: RngCore>(&self, bits: &mut Bits<R>) -> u64 {
        match self.burst {
            BurstLaw::Zero => 0,
            BurstLaw::HalfGeometric => bits.geometric_half(),
            BurstLaw::Inversion { q, inv_ln_q } => {
                let u = bits.unit_open();
                if u > q {
                    0
                } else {
                    let g = libm::log(u) * inv_ln_q;
                    if g >= 9.0e18 {
                        u64::MAX / 2
                    } else {
                        g as u64
                    }
                }
            }
        }
    }
}

/// Row laws for `|j| <= reach`, with on-the-fly evaluation further out.
#[derive(Clone, Debug)]
pub struct StepTable {
    profile: ProfileSpec,
    reach: i64,
    laws: Vec<LevelLaw>,
}

/// Rows precomputed at most.
pub const MAX_TABLE_REACH: u64 = 1 << 16;

impl StepTable {
    /// Precomputes rows a walk of `n_max` steps can reach, up to
    /// [`MAX_TABLE_REACH`].
    pub fn new(profile: &ProfileSpec, n_max: u64) -> Self {
        let reach = n_max.min(MAX_TABLE_REACH) as i64;
        let laws = (-reach..=reach).map(|j| LevelLaw::new(profile, j)).collect();
        Self {
            profile: profile.clone(),
            reach,
            laws,
        }
    }

    pub fn profile(&self) -> &ProfileSpec {
        &self.profile
    }

    #[inline]
    pub(crate) fn law(&self, j: i64) -> LevelLaw {
        if j.abs() <= self.reach {
            self.laws[(j + self.reach) as usize]
        } else {
            LevelLaw::new(&self.profile, j)
        }
    }
}
