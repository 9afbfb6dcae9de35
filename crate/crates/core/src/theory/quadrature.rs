//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 2000;

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`; reports failure
/// when the interval budget runs out first.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (value, err) = kronrod(&f, a, b);
    let mut parts: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, value, err)];
    let mut total_err = err;
    loop {
        if !total_err.is_finite() {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total_err,
            });
        }
        if total_err <= tol {
            break;
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total_err,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, e) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            return Err(Error::Quadrature {
                tolerance: tol,
                estimate: total_err,
            });
        }
        let left = kronrod(&f, lo, mid);
        let right = kronrod(&f, mid, hi);
        total_err += left.1 + right.1 - e;
        parts.push((lo, mid, left.0, left.1));
        parts.push((mid, hi, right.0, right.1));
    }
    Ok(parts.iter().map(|p| p.2).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_smooth() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = integrate(libm::exp, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (core::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn sharp_feature() {
        let v = integrate(|x| libm::exp(-400.0 * (x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-10).unwrap();
        let exact = 0.05 * libm::sqrt(core::f64::consts::PI) * 0.5 * (libm::erf(14.0) + libm::erf(6.0));
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn failure_is_reported() {
        // Non-integrable spike cannot reach the tolerance.
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-9);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
