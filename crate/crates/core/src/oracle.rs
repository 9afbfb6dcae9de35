//! Exact small-`N` laws of the walk started at the origin.
//!
//! Rational profiles are evaluated in exact rational arithmetic, the others in
//! `f64`. Site and local-time laws come from forward dynamic programming; the
//! expected range needs the path history and is computed by enumerating every
//! path of positive probability.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::engine::Site;
use crate::profiles::{half, to_big, ProfileSpec};
use crate::{Error, Result};

pub const SITE_LIMIT: u32 = 14;
pub const LOCAL_TIME_LIMIT: u32 = 10;
pub const RANGE_LIMIT: u32 = 10;

/// Tolerance on the total mass of a floating-point distribution.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

/// A probability, exact when the profile allows it.
#[derive(Clone, Debug, PartialEq)]
pub enum Probability {
    Exact(BigRational),
    Float(f64),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => big_to_f64(r),
            Probability::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Probability::Exact(r) => Some(r),
            Probability::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }

    /// Whether this is 1 (exactly, or within [`FLOAT_MASS_TOLERANCE`]).
    pub fn is_unit(&self) -> bool {
        match self {
            Probability::Exact(r) => r.is_one(),
            Probability::Float(x) => (x - 1.0).abs() <= FLOAT_MASS_TOLERANCE,
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) => write!(f, "{r}"),
            Probability::Float(x) => write!(f, "{x}"),
        }
    }
}

fn big_to_f64(r: &BigRational) -> f64 {
    // Scale so that numerator / denominator survives the f64 conversion.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.denom().bits().saturating_sub(60);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Law of `C(N)`: nonzero masses only.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub n: u32,
    pub masses: BTreeMap<Site, Probability>,
    pub total: Probability,
}

impl ExactDistribution {
    pub fn mass(&self, site: Site) -> Probability {
        match self.masses.get(&site) {
            Some(p) => p.clone(),
            None if self.total.is_exact() => Probability::Exact(<BigRational as Zero>::zero()),
            None => Probability::Float(0.0),
        }
    }

    pub fn to_f64_map(&self) -> BTreeMap<Site, f64> {
        self.masses.iter().map(|(s, p)| (*s, p.to_f64())).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.total.is_exact()
    }
}

trait Weight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn times(&self, m: u32) -> Self;
}

impl Weight for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn times(&self, m: u32) -> Self {
        self * BigRational::from_integer(BigInt::from(m))
    }
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn times(&self, m: u32) -> Self {
        self * f64::from(m)
    }
}

// Numerators over a common denominator; the caller checks for overflow.
impl Weight for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn times(&self, m: u32) -> Self {
        self * u128::from(m)
    }
}

/// Per-row `(p_j, 1/2 - p_j)` for rows `-n..=n`.
struct Rows<W> {
    n: i64,
    weights: Vec<(W, W)>,
}

impl<W: Weight> Rows<W> {
    fn get(&self, j: i64) -> &(W, W) {
        &self.weights[(j + self.n) as usize]
    }
}

fn exact_rows(profile: &ProfileSpec, n: u32) -> Option<Rows<BigRational>> {
    let n = i64::from(n);
    let weights = (-n..=n)
        .map(|j| {
            profile.p_exact(j).map(|p| {
                let h = half() - p;
                (to_big(&p), to_big(&h))
            })
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Rows { n, weights })
}

fn float_rows(profile: &ProfileSpec, n: u32) -> Rows<f64> {
    let n = i64::from(n);
    let weights = (-n..=n)
        .map(|j| {
            let p = profile.p(j);
            (p, 0.5 - p)
        })
        .collect();
    Rows { n, weights }
}

/// The four moves with the index of their weight (0 vertical, 1 horizontal).
const MOVES: [(i64, i64, usize); 4] = [(0, 1, 0), (0, -1, 0), (1, 0, 1), (-1, 0, 1)];

struct Grid<W> {
    n: i64,
    side: usize,
    cells: Vec<W>,
}

impl<W: Weight> Grid<W> {
    fn new(n: u32) -> Self {
        let side = 2 * n as usize + 1;
        Self {
            n: i64::from(n),
            side,
            cells: vec![W::zero(); side * side],
        }
    }

    fn index(&self, k: i64, j: i64) -> usize {
        (k + self.n) as usize * self.side + (j + self.n) as usize
    }

    fn site(&self, idx: usize) -> Site {
        Site::new((idx / self.side) as i64 - self.n, (idx % self.side) as i64 - self.n)
    }
}

fn check_limit(n: u32, limit: u32) -> Result<()> {
    if n > limit {
        return Err(Error::OracleTooLarge { n, limit });
    }
    Ok(())
}

fn site_dp<W: Weight>(rows: &Rows<W>, n: u32) -> Grid<W> {
    let mut cur = Grid::new(n);
    let origin = cur.index(0, 0);
    cur.cells[origin] = W::one();
    for _ in 0..n {
        let mut next = Grid::<W>::new(n);
        for idx in 0..cur.cells.len() {
            let w = &cur.cells[idx];
            if w.is_zero() {
                continue;
            }
            let s = cur.site(idx);
            let (v, h) = rows.get(s.j);
            for (dk, dj, which) in MOVES {
                let step = if which == 0 { v } else { h };
                if step.is_zero() {
                    continue;
                }
                let to = next.index(s.k + dk, s.j + dj);
                let add = w.mul(step);
                next.cells[to].add_assign(&add);
            }
        }
        cur = next;
    }
    cur
}

fn collect_sites<W: Weight>(grid: Grid<W>, wrap: impl Fn(W) -> Probability) -> BTreeMap<Site, Probability> {
    let mut out = BTreeMap::new();
    for (idx, w) in grid.cells.iter().enumerate() {
        if !w.is_zero() {
            out.insert(grid.site(idx), wrap(w.clone()));
        }
    }
    out
}

/// Law of `C(N)` for `N <= 14`.
pub fn exact_site_distribution(profile: &ProfileSpec, n: u32) -> Result<ExactDistribution> {
    check_limit(n, SITE_LIMIT)?;
    if let Some(rows) = exact_rows(profile, n) {
        let masses = collect_sites(site_dp(&rows, n), Probability::Exact);
        let total = masses
            .values()
            .filter_map(Probability::exact)
            .fold(<BigRational as Zero>::zero(), |acc, p| acc + p);
        return Ok(ExactDistribution {
            n,
            masses,
            total: Probability::Exact(total),
        });
    }
    let rows = float_rows(profile, n);
    let masses = collect_sites(site_dp(&rows, n), Probability::Float);
    let total = masses.values().map(Probability::to_f64).sum();
    Ok(ExactDistribution {
        n,
        masses,
        total: Probability::Float(total),
    })
}

fn local_time_dp<W: Weight>(rows: &Rows<W>, n: u32) -> Vec<W> {
    let layers = n as usize / 2 + 1;
    let mut cur: Vec<Grid<W>> = (0..layers).map(|_| Grid::new(n)).collect();
    let origin = cur[0].index(0, 0);
    cur[0].cells[origin] = W::one();
    for _ in 0..n {
        let mut next: Vec<Grid<W>> = (0..layers).map(|_| Grid::new(n)).collect();
        for (count, grid) in cur.iter().enumerate() {
            for idx in 0..grid.cells.len() {
                let w = &grid.cells[idx];
                if w.is_zero() {
                    continue;
                }
                let s = grid.site(idx);
                let (v, h) = rows.get(s.j);
                for (dk, dj, which) in MOVES {
                    let step = if which == 0 { v } else { h };
                    if step.is_zero() {
                        continue;
                    }
                    let (k, j) = (s.k + dk, s.j + dj);
                    let c = count + usize::from(k == 0 && j == 0);
                    let to = next[c].index(k, j);
                    let add = w.mul(step);
                    next[c].cells[to].add_assign(&add);
                }
            }
        }
        cur = next;
    }
    cur.into_iter()
        .map(|grid| {
            let mut total = W::zero();
            for w in &grid.cells {
                total.add_assign(w);
            }
            total
        })
        .collect()
}

/// Law of `Xi((0,0), N)`, the number of visits to the origin at times
/// `1..=N`, for `N <= 10`. Only counts of positive probability appear.
pub fn exact_origin_local_time_distribution(profile: &ProfileSpec, n: u32) -> Result<BTreeMap<u64, Probability>> {
    check_limit(n, LOCAL_TIME_LIMIT)?;
    let masses: Vec<Probability> = match exact_rows(profile, n) {
        Some(rows) => local_time_dp(&rows, n).into_iter().map(Probability::Exact).collect(),
        None => local_time_dp(&float_rows(profile, n), n)
            .into_iter()
            .map(Probability::Float)
            .collect(),
    };
    Ok(masses
        .into_iter()
        .enumerate()
        .filter(|(_, p)| p.to_f64() != 0.0 || p.exact().is_some_and(|r| !Zero::is_zero(r)))
        .map(|(c, p)| (c as u64, p))
        .collect())
}

struct RangeSearch<'a, W> {
    rows: &'a Rows<W>,
    n: usize,
    path: Vec<Site>,
    acc: W,
}

impl<W: Weight> RangeSearch<'_, W> {
    fn descend(&mut self, weight: W, distinct: u32) {
        if self.path.len() == self.n + 1 {
            self.acc.add_assign(&weight.times(distinct));
            return;
        }
        let s = *self.path.last().expect("path starts at the origin");
        let (v, h) = self.rows.get(s.j);
        for (dk, dj, which) in MOVES {
            let step = if which == 0 { v } else { h };
            if step.is_zero() {
                continue;
            }
            let to = Site::new(s.k + dk, s.j + dj);
            // Time 0 is not part of the range.
            let fresh = !self.path[1..].contains(&to);
            let w = weight.mul(step);
            self.path.push(to);
            self.descend(w, distinct + u32::from(fresh));
            self.path.pop();
        }
    }
}

fn range_search<W: Weight>(rows: &Rows<W>, n: u32) -> W {
    let mut search = RangeSearch {
        rows,
        n: n as usize,
        path: Vec::with_capacity(n as usize + 1),
        acc: W::zero(),
    };
    search.path.push(Site::ORIGIN);
    search.descend(W::one(), 0);
    search.acc
}

/// Integer numerators of `rows` over their least common denominator `d`,
/// provided `n * d^n` fits in a `u128`.
fn integer_rows(rows: &Rows<BigRational>, n: u32) -> Option<(Rows<u128>, u128)> {
    let mut d = BigInt::one();
    for (v, h) in &rows.weights {
        d = d.lcm(v.denom()).lcm(h.denom());
    }
    let d128 = d.to_u128()?;
    let mut bound = u128::from(n.max(1));
    for _ in 0..n {
        bound = bound.checked_mul(d128)?;
    }
    let scale = BigRational::from_integer(d);
    let weights = rows
        .weights
        .iter()
        .map(|(v, h)| {
            let v = (v * &scale).to_integer().to_u128()?;
            let h = (h * &scale).to_integer().to_u128()?;
            Some((v, h))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((Rows { n: rows.n, weights }, d128))
}

/// `E R(N)` with `R(N) = #{C(1), ..., C(N)}`, for `N <= 10`.
pub fn exact_expected_range(profile: &ProfileSpec, n: u32) -> Result<Probability> {
    check_limit(n, RANGE_LIMIT)?;
    let Some(rows) = exact_rows(profile, n) else {
        return Ok(Probability::Float(range_search(&float_rows(profile, n), n)));
    };
    if let Some((ints, d)) = integer_rows(&rows, n) {
        let sum = range_search(&ints, n);
        let denom = (0..n).fold(BigInt::one(), |acc, _| acc * BigInt::from(d));
        return Ok(Probability::Exact(BigRational::new(BigInt::from(sum), denom)));
    }
    Ok(Probability::Exact(range_search(&rows, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Probability {
        Probability::Exact(BigRational::new(n.into(), d.into()))
    }

    fn bundled() -> Vec<ProfileSpec> {
        vec![
            ProfileSpec::constant(Rational::new(1, 4)).unwrap(),
            ProfileSpec::comb(),
            ProfileSpec::periodic(vec![Rational::new(1, 4), Rational::new(1, 2)]).unwrap(),
            ProfileSpec::half_plane_half_comb(),
            ProfileSpec::power_tail(2.0, 2.0, 0.25).unwrap(),
            ProfileSpec::constant(Rational::new(1, 3)).unwrap(),
        ]
    }

    #[test]
    fn one_step_from_constant() {
        let p = Rational::new(1, 3);
        let d = exact_site_distribution(&ProfileSpec::constant(p).unwrap(), 1).unwrap();
        assert_eq!(d.mass(Site::new(1, 0)), q(1, 6));
        assert_eq!(d.mass(Site::new(-1, 0)), q(1, 6));
        assert_eq!(d.mass(Site::new(0, 1)), q(1, 3));
        assert_eq!(d.mass(Site::new(0, -1)), q(1, 3));
        assert_eq!(d.masses.len(), 4);
        let quarter = exact_site_distribution(&ProfileSpec::constant(Rational::new(1, 4)).unwrap(), 1).unwrap();
        assert!(quarter.masses.values().all(|m| *m == q(1, 4)));
    }

    #[test]
    fn two_step_returns() {
        let comb = exact_site_distribution(&ProfileSpec::comb(), 2).unwrap();
        assert_eq!(comb.mass(Site::ORIGIN), q(3, 8));
        let simple = ProfileSpec::constant(Rational::new(1, 4)).unwrap();
        assert_eq!(exact_site_distribution(&simple, 2).unwrap().mass(Site::ORIGIN), q(1, 4));
        let lt = exact_origin_local_time_distribution(&ProfileSpec::comb(), 2).unwrap();
        assert_eq!(lt.len(), 2);
        assert_eq!(lt[&1], q(3, 8));
        assert_eq!(lt[&0], q(5, 8));
    }

    #[test]
    fn mass_parity_and_support() {
        for profile in bundled() {
            for n in 0..=SITE_LIMIT {
                let d = exact_site_distribution(&profile, n).unwrap();
                assert!(d.total.is_unit(), "{profile} N={n} total {}", d.total);
                assert_eq!(d.is_exact(), profile.is_rational());
                for s in d.masses.keys() {
                    assert_eq!((s.k + s.j).rem_euclid(2), i64::from(n % 2));
                    assert!(s.k.abs() + s.j.abs() <= i64::from(n));
                }
            }
        }
    }

    #[test]
    fn local_time_laws() {
        for profile in bundled() {
            let zero = exact_origin_local_time_distribution(&profile, 0).unwrap();
            assert_eq!(zero.len(), 1);
            assert!(zero[&0].is_unit());
            for n in 1..=LOCAL_TIME_LIMIT {
                let lt = exact_origin_local_time_distribution(&profile, n).unwrap();
                let total: f64 = lt.values().map(Probability::to_f64).sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert!(lt.keys().all(|&c| c <= u64::from(n / 2)));
                if profile.is_rational() {
                    let exact = lt
                        .values()
                        .filter_map(Probability::exact)
                        .fold(<BigRational as Zero>::zero(), |a, p| a + p);
                    assert!(exact.is_one());
                }
                // E Xi = sum over even r of P(C(r) = 0).
                let mean: f64 = lt.iter().map(|(c, p)| *c as f64 * p.to_f64()).sum();
                let by_sites: f64 = (1..=n)
                    .map(|r| exact_site_distribution(&profile, r).unwrap().mass(Site::ORIGIN).to_f64())
                    .sum();
                assert!((mean - by_sites).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_ranges() {
        for profile in bundled() {
            assert_eq!(exact_expected_range(&profile, 0).unwrap().to_f64(), 0.0);
            assert_eq!(exact_expected_range(&profile, 1).unwrap().to_f64(), 1.0);
            assert_eq!(exact_expected_range(&profile, 2).unwrap().to_f64(), 2.0);
        }
        // C(3) = C(1) has probability 3/8 whatever the first step.
        assert_eq!(exact_expected_range(&ProfileSpec::comb(), 3).unwrap(), q(21, 8));
    }

    /// Brute force over all 4^N move words with plain `f64` weights.
    fn brute_range(profile: &ProfileSpec, n: u32) -> f64 {
        let mut total = 0.0;
        for word in 0..4u64.pow(n) {
            let (mut k, mut j, mut w) = (0i64, 0i64, 1.0);
            let mut seen: Vec<(i64, i64)> = Vec::new();
            let mut code = word;
            for _ in 0..n {
                let p = profile.p(j);
                let (dk, dj, step) = match code % 4 {
                    0 => (0, 1, p),
                    1 => (0, -1, p),
                    2 => (1, 0, 0.5 - p),
                    _ => (-1, 0, 0.5 - p),
                };
                code /= 4;
                w *= step;
                k += dk;
                j += dj;
                if !seen.contains(&(k, j)) {
                    seen.push((k, j));
                }
            }
            total += w * seen.len() as f64;
        }
        total
    }

    #[test]
    fn range_matches_brute_force() {
        for profile in bundled() {
            for n in 3..=7 {
                let exact = exact_expected_range(&profile, n).unwrap().to_f64();
                let brute = brute_range(&profile, n);
                assert!((exact - brute).abs() < 1e-12, "{profile} N={n}: {exact} vs {brute}");
            }
        }
    }

    #[test]
    fn rational_fallback_agrees_with_integer_path() {
        let profile = ProfileSpec::constant(Rational::new(1, 3)).unwrap();
        let rows = exact_rows(&profile, 5).unwrap();
        let slow = range_search(&rows, 5);
        assert_eq!(exact_expected_range(&profile, 5).unwrap(), Probability::Exact(slow));
    }

    #[test]
    fn limits_are_enforced() {
        let comb = ProfileSpec::comb();
        assert!(matches!(
            exact_site_distribution(&comb, 15),
            Err(Error::OracleTooLarge { n: 15, limit: 14 })
        ));
        assert!(exact_origin_local_time_distribution(&comb, 11).is_err());
        assert!(exact_expected_range(&comb, 11).is_err());
    }
}
