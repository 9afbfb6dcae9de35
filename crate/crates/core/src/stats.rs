//! Turning replica samples into pass/fail evidence.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::theory::special::{chi_square_quantile, chi_square_sf};
use crate::{Error, Result};

/// Where a sample set came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleMeta {
    pub seed: u64,
    pub n: u64,
    pub profile: String,
}

/// Observations from independent replicas. The sorted copy is built on the
/// first order-statistic query and reused afterwards.
#[derive(Clone, Debug, Default)]
pub struct SampleSet {
    values: Vec<f64>,
    sorted: OnceCell<Vec<f64>>,
    pub meta: SampleMeta,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            sorted: OnceCell::new(),
            meta: SampleMeta::default(),
        }
    }

    pub fn with_meta(values: Vec<f64>, meta: SampleMeta) -> Self {
        Self {
            meta,
            ..Self::new(values)
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted(&self) -> &[f64] {
        self.sorted.get_or_init(|| {
            let mut v = self.values.clone();
            v.sort_by(f64::total_cmp);
            v
        })
    }

    /// Linear-interpolation quantile (type 7).
    pub fn quantile(&self, q: f64) -> Result<f64> {
        let s = self.sorted();
        if s.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain("quantile level must lie in [0, 1]"));
        }
        let h = (s.len() - 1) as f64 * q;
        let lo = libm::floor(h) as usize;
        let hi = (lo + 1).min(s.len() - 1);
        let (a, b) = (s[lo], s[hi]);
        if a == b || a.is_infinite() || b.is_infinite() {
            return Ok(if h - lo as f64 > 0.0 { b } else { a });
        }
        Ok(a + (h - lo as f64) * (b - a))
    }

    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }

    pub fn iqr(&self) -> Result<f64> {
        Ok(self.quantile(0.75)? - self.quantile(0.25)?)
    }

    /// Sample variance with the `n - 1` divisor.
    pub fn variance(&self) -> Result<f64> {
        let n = self.values.len();
        if n < 2 {
            return Err(Error::TooFewSamples { needed: 2, got: n });
        }
        let mean = self.values.iter().sum::<f64>() / n as f64;
        let ss: f64 = self.values.iter().map(|x| (x - mean) * (x - mean)).sum();
        Ok(ss / (n - 1) as f64)
    }
}

impl From<Vec<f64>> for SampleSet {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

/// Conservative critical value `2.0 / sqrt(n)` for the one-sample KS distance.
pub fn ks_critical(n: usize) -> f64 {
    2.0 / libm::sqrt(n as f64)
}

/// Sup-distance between the empirical CDF and `cdf`, taking both one-sided
/// gaps at every sample point.
pub fn ks_statistic(samples: &SampleSet, cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let s = samples.sorted();
    if s.len() < 10 {
        return Err(Error::TooFewSamples {
            needed: 10,
            got: s.len(),
        });
    }
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        // Ties share one CDF evaluation.
        let x = s[i];
        let mut end = i + 1;
        while end < s.len() && s[end] == x {
            end += 1;
        }
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max(end as f64 / n - f);
        i = end;
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub bins: usize,
    pub p_value: f64,
}

impl ChiSquare {
    /// True when the statistic lies below the `level` quantile of chi-square(dof).
    pub fn passes(&self, level: f64) -> bool {
        self.statistic <= chi_square_quantile(level, self.dof as f64)
    }
}

/// Pearson chi-square of observed counts against expected probabilities.
///
/// Bins follow the key order of `expected`; adjacent bins are merged until
/// each carries `n P >= 5`, and a short tail joins the last full bin.
pub fn chi_square<K: Ord + Clone>(
    observed: &BTreeMap<K, i64>,
    expected: &BTreeMap<K, f64>,
    n: u64,
) -> Result<ChiSquare> {
    for (key, &count) in observed {
        if count < 0 {
            return Err(Error::NegativeCount);
        }
        if count > 0 && expected.get(key).is_none_or(|p| *p <= 0.0) {
            return Err(Error::ImpossibleOutcome);
        }
    }
    let nf = n as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (key, &p) in expected {
        if p <= 0.0 {
            continue;
        }
        obs += *observed.get(key).unwrap_or(&0) as f64;
        exp += nf * p;
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => bins.push((obs, exp)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::SingleBin);
    }
    let statistic = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() - 1;
    Ok(ChiSquare {
        statistic,
        dof,
        bins: bins.len(),
        p_value: chi_square_sf(statistic, dof as f64),
    })
}

/// Arithmetic mean and its standard error `sd / sqrt(n)`.
pub fn mean_ci(samples: &SampleSet) -> Result<(f64, f64)> {
    let n = samples.len();
    let var = samples.variance()?;
    let mean = samples.values().iter().sum::<f64>() / n as f64;
    Ok((mean, libm::sqrt(var / n as f64)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log line.
    pub residual: f64,
    /// `(ln N, ln statistic)` points the line was fitted to.
    pub grid: Vec<(f64, f64)>,
}

/// Least-squares slope of `ln statistic` against `ln N`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<FitReport> {
    if points.len() < 4 {
        return Err(Error::TooFewSamples {
            needed: 4,
            got: points.len(),
        });
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) || points[0].0 <= 0.0 {
        return Err(Error::UnorderedGrid);
    }
    if points.iter().any(|&(_, s)| !(s > 0.0)) {
        return Err(Error::NonPositiveStatistic);
    }
    let grid: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, s)| (libm::log(n), libm::log(s)))
        .collect();
    let m = grid.len() as f64;
    let mx = grid.iter().map(|p| p.0).sum::<f64>() / m;
    let my = grid.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = grid.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = grid.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = grid
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    Ok(FitReport {
        slope,
        intercept,
        residual: libm::sqrt(ss / m),
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn std_normal_cdf(x: f64) -> Result<f64> {
        Ok(0.5 * libm::erfc(-x / core::f64::consts::SQRT_2))
    }

    #[test]
    fn ks_at_exact_quantiles() {
        // Uniform law, samples at i/(n+1).
        let n = 200;
        let s = SampleSet::new((1..=n).map(|i| i as f64 / (n + 1) as f64).collect());
        let d = ks_statistic(&s, |x| Ok(x.clamp(0.0, 1.0))).unwrap();
        assert!(d <= 1.0 / (n + 1) as f64 + 1e-12);
    }

    #[test]
    fn ks_constant_samples() {
        let s = SampleSet::new(vec![0.3; 50]);
        let d = ks_statistic(&s, std_normal_cdf).unwrap();
        let f = std_normal_cdf(0.3).unwrap();
        assert!(d >= f.max(1.0 - f) - 1e-15);
    }

    #[test]
    fn ks_needs_samples() {
        let s = SampleSet::new(vec![1.0; 9]);
        assert!(matches!(
            ks_statistic(&s, std_normal_cdf),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn chi_square_zero_for_exact_counts() {
        let mut obs = BTreeMap::new();
        let mut exp = BTreeMap::new();
        for (i, p) in [0.1, 0.2, 0.3, 0.4].into_iter().enumerate() {
            exp.insert(i, p);
            obs.insert(i, (p * 1000.0) as i64);
        }
        let c = chi_square(&obs, &exp, 1000).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert_eq!(c.dof, 3);
        assert!(c.passes(0.999));
    }

    #[test]
    fn chi_square_errors() {
        let exp: BTreeMap<i32, f64> = [(0, 0.5), (1, 0.5)].into_iter().collect();
        let neg: BTreeMap<i32, i64> = [(0, -1)].into_iter().collect();
        assert_eq!(chi_square(&neg, &exp, 10), Err(Error::NegativeCount));
        let bad: BTreeMap<i32, i64> = [(7, 3)].into_iter().collect();
        assert_eq!(chi_square(&bad, &exp, 10), Err(Error::ImpossibleOutcome));
        let few: BTreeMap<i32, i64> = [(0, 2), (1, 2)].into_iter().collect();
        assert_eq!(chi_square(&few, &exp, 4), Err(Error::SingleBin));
    }

    #[test]
    fn chi_square_merges_small_bins() {
        let exp: BTreeMap<i32, f64> =
            [(0, 0.001), (1, 0.004), (2, 0.495), (3, 0.497), (4, 0.003)].into_iter().collect();
        let obs: BTreeMap<i32, i64> =
            [(0, 1), (1, 4), (2, 495), (3, 497), (4, 3)].into_iter().collect();
        let c = chi_square(&obs, &exp, 1000).unwrap();
        // {0,1} | {2} | {3,4}: the short tail joins the last full bin.
        assert_eq!(c.bins, 3);
        assert!(c.statistic.abs() < 1e-12);
    }

    #[test]
    fn mean_ci_examples() {
        assert_eq!(mean_ci(&SampleSet::new(vec![3.0; 5])).unwrap(), (3.0, 0.0));
        let (m, se) = mean_ci(&SampleSet::new(vec![0.0, 2.0])).unwrap();
        assert_eq!(m, 1.0);
        assert!((se - 1.0).abs() < 1e-15);
        assert!(mean_ci(&SampleSet::new(vec![1.0])).is_err());
    }

    #[test]
    fn loglog_examples() {
        let sq: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64 * 10.0, (i * i) as f64 * 100.0)).collect();
        let fit = loglog_slope(&sq).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-10);
        assert!(fit.residual < 1e-10);
        let flat: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 7.0)).collect();
        assert!(loglog_slope(&flat).unwrap().slope.abs() < 1e-12);
        assert_eq!(
            loglog_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]),
            Err(Error::NonPositiveStatistic)
        );
        assert_eq!(
            loglog_slope(&[(1.0, 1.0), (3.0, 1.0), (2.0, 1.0), (4.0, 1.0)]),
            Err(Error::UnorderedGrid)
        );
    }

    #[test]
    fn quantiles() {
        let s = SampleSet::new(vec![4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!(s.median().unwrap(), 3.0);
        assert_eq!(s.iqr().unwrap(), 2.0);
        assert_eq!(s.quantile(0.1).unwrap(), 1.4);
        let inf = SampleSet::new(vec![1.0, f64::INFINITY, 2.0]);
        assert_eq!(inf.median().unwrap(), 2.0);
    }
}
