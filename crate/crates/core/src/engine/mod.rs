//! Simulation of the walk by two equivalent mechanisms.
//!
//! * The direct chain: from `(k, j)` step to `(k, j +- 1)` with probability
//!   `p_j` each and to `(k +- 1, j)` with probability `1/2 - p_j` each.
//! * The construction: on every arrival at row `j` take a geometric burst of
//!   fair horizontal steps, `P(G = m) = 2 p_j (1 - 2 p_j)^m`, then exactly one
//!   fair vertical step. The last burst is cut so that `H_N + V_N = N`.
//!
//! Both start at the origin and count a site visit at times `1..=N`.

mod construction;
mod direct;
mod field;
pub mod rng;
mod table;

use alloc::vec::Vec;

use rand_core::RngCore;

pub use field::{LocalTimeField, BYTES_PER_SITE};
pub use rng::{derive_seed, label_hash, replica_rng, Bits, ReplicaRng};
pub use table::{StepTable, MAX_TABLE_REACH};

use crate::profiles::ProfileSpec;
use crate::{Error, Result};

/// A lattice site: `k` horizontal, `j` vertical (the row).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub k: i64,
    pub j: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { k: 0, j: 0 };

    pub const fn new(k: i64, j: i64) -> Self {
        Self { k, j }
    }
}

/// Position plus step counters; `horizontal + vertical == steps` always.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WalkState {
    pub pos: Site,
    pub steps: u64,
    pub horizontal: u64,
    pub vertical: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mechanism {
    Direct,
    Construction,
}

impl Mechanism {
    pub fn as_str(self) -> &'static str {
        match self {
            Mechanism::Direct => "direct",
            Mechanism::Construction => "construction",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldMode {
    /// Counters and tracked sites only.
    #[default]
    Off,
    /// Every visited site (memory grows with the range).
    Full,
    /// Only sites with `|k|, |j| <= radius`.
    Window { radius: u32 },
}

/// What a run records besides the always-on counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverConfig {
    pub field: FieldMode,
    /// Sites whose local time is reported.
    pub tracked: Vec<Site>,
    /// Step counts at which a [`Snapshot`] is taken (must be increasing).
    pub checkpoints: Vec<u64>,
    pub memory_budget: u64,
}

/// Default memory budget for a single replica's field.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

impl Default for ObserverConfig {
    fn default() -> Self {
        Self {
            field: FieldMode::Off,
            tracked: Vec::new(),
            checkpoints: Vec::new(),
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl ObserverConfig {
    pub fn counters() -> Self {
        Self::default()
    }

    pub fn full_field() -> Self {
        Self {
            field: FieldMode::Full,
            ..Self::default()
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_tracked(mut self, tracked: Vec<Site>) -> Self {
        self.tracked = tracked;
        self
    }

    fn validate(&self, n: u64) -> Result<()> {
        if self.checkpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("checkpoints must be strictly increasing"));
        }
        let sites = match self.field {
            FieldMode::Off => return Ok(()),
            FieldMode::Full => n,
            FieldMode::Window { radius } => {
                let side = 2 * u64::from(radius) + 1;
                n.min(side.saturating_mul(side))
            }
        };
        if n > i32::MAX as u64 {
            return Err(Error::WalkTooLong(n));
        }
        let needed = sites.saturating_mul(BYTES_PER_SITE);
        if needed > self.memory_budget {
            return Err(Error::MemoryBudget {
                needed,
                budget: self.memory_budget,
            });
        }
        Ok(())
    }
}

/// Observables at an intermediate step count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub steps: u64,
    pub pos: Site,
    pub horizontal: u64,
    pub vertical: u64,
    pub returns_to_origin: u64,
    pub xi2_zero: u64,
    pub range: Option<u64>,
    pub tracked: Vec<u64>,
}

/// One replica's outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSummary {
    pub pos: Site,
    pub steps: u64,
    pub horizontal: u64,
    pub vertical: u64,
    /// `#{r in 1..=N : C(r) = (0,0)}`.
    pub returns_to_origin: u64,
    /// Vertical steps that land on row 0: the visits of the vertical
    /// component to 0, not counting its start.
    pub xi2_zero: u64,
    pub field: Option<LocalTimeField>,
    /// `(site, local time)` for each tracked site, in request order.
    pub tracked: Vec<(Site, u64)>,
    pub snapshots: Vec<Snapshot>,
}

impl WalkSummary {
    /// `Xi(site, N)` from whatever the run recorded.
    pub fn local_time(&self, site: Site) -> Result<u64> {
        if let Some(field) = &self.field {
            return field.local_time(site);
        }
        if let Some((_, t)) = self.tracked.iter().find(|(s, _)| *s == site) {
            return Ok(*t);
        }
        if site == Site::ORIGIN {
            return Ok(self.returns_to_origin);
        }
        Err(Error::Domain("site was not recorded"))
    }

    pub fn range(&self) -> Option<u64> {
        self.field.as_ref().map(LocalTimeField::range)
    }

    pub fn state(&self) -> WalkState {
        WalkState {
            pos: self.pos,
            steps: self.steps,
            horizontal: self.horizontal,
            vertical: self.vertical,
        }
    }
}

/// Mutable run state shared by both mechanisms.
pub(crate) struct Walker<'a> {
    pub k: i64,
    pub j: i64,
    pub n: u64,
    pub h: u64,
    pub v: u64,
    pub returns: u64,
    pub xi2: u64,
    tracked: &'a [Site],
    tracked_counts: Vec<u64>,
    pub field: Option<LocalTimeField>,
    checkpoints: &'a [u64],
    next_checkpoint: usize,
    snapshots: Vec<Snapshot>,
}

impl<'a> Walker<'a> {
    fn new(cfg: &'a ObserverConfig, n: u64) -> Self {
        let field = match cfg.field {
            FieldMode::Off => None,
            FieldMode::Full => Some(LocalTimeField::new(None)),
            FieldMode::Window { radius } => Some(LocalTimeField::new(Some(radius))),
        };
        let cut = cfg.checkpoints.partition_point(|&c| c <= n);
        let checkpoints = &cfg.checkpoints[..cut];
        Self {
            k: 0,
            j: 0,
            n: 0,
            h: 0,
            v: 0,
            returns: 0,
            xi2: 0,
            tracked: &cfg.tracked,
            tracked_counts: alloc::vec![0; cfg.tracked.len()],
            field,
            checkpoints,
            next_checkpoint: 0,
            snapshots: Vec::with_capacity(checkpoints.len()),
        }
    }

    /// Records a visit to the current site.
    #[inline]
    pub fn arrive(&mut self) {
        if self.k == 0 && self.j == 0 {
            self.returns += 1;
        }
        if !self.tracked.is_empty() {
            for (i, s) in self.tracked.iter().enumerate() {
                if s.k == self.k && s.j == self.j {
                    self.tracked_counts[i] += 1;
                }
            }
        }
        if let Some(field) = &mut self.field {
            field.record(Site::new(self.k, self.j));
        }
    }

    /// Next step count at which the run must pause (checkpoint or end).
    #[inline]
    pub fn stop(&self, n_total: u64) -> u64 {
        self.checkpoints
            .get(self.next_checkpoint)
            .copied()
            .unwrap_or(n_total)
    }

    pub fn snapshot_if_due(&mut self) {
        while self.checkpoints.get(self.next_checkpoint) == Some(&self.n) {
            self.snapshots.push(Snapshot {
                steps: self.n,
                pos: Site::new(self.k, self.j),
                horizontal: self.h,
                vertical: self.v,
                returns_to_origin: self.returns,
                xi2_zero: self.xi2,
                range: self.field.as_ref().map(LocalTimeField::range),
                tracked: self.tracked_counts.clone(),
            });
            self.next_checkpoint += 1;
        }
    }

    /// Any tracked site (the origin always counts) on row `j` within
    /// horizontal distance `m` of the current `k`.
    #[inline]
    pub fn target_within(&self, m: u64) -> bool {
        if self.j == 0 && self.k.unsigned_abs() <= m {
            return true;
        }
        self.tracked
            .iter()
            .any(|s| s.j == self.j && s.k.abs_diff(self.k) <= m)
    }

    /// Distance from row `j` to the nearest row holding a tracked site or
    /// the origin.
    #[inline]
    pub fn tracked_row_distance(&self, j: i64) -> u64 {
        let mut d = j.unsigned_abs();
        for s in self.tracked {
            d = d.min(s.j.abs_diff(j));
        }
        d
    }

    fn finish(self) -> WalkSummary {
        let tracked = self
            .tracked
            .iter()
            .copied()
            .zip(self.tracked_counts.iter().copied())
            .collect();
        WalkSummary {
            pos: Site::new(self.k, self.j),
            steps: self.n,
            horizontal: self.h,
            vertical: self.v,
            returns_to_origin: self.returns,
            xi2_zero: self.xi2,
            field: self.field,
            tracked,
            snapshots: self.snapshots,
        }
    }
}

/// Samples `G` with `P(G = k) = 2p (1 - 2p)^k` by inversion; `p = 1/2` gives 0.
pub fn sample_geometric<R: RngCore>(p: f64, bits: &mut Bits<R>) -> Result<u64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::Domain("geometric parameter p must lie in (0, 1/2]"));
    }
    if p == 0.5 {
        return Ok(0);
    }
    let q = 1.0 - 2.0 * p;
    let u = bits.unit_open();
    if u > q {
        return Ok(0);
    }
    Ok((libm::log(u) / libm::log(q)) as u64)
}

/// One step of the direct chain.
pub fn step_direct<R: RngCore>(state: &mut WalkState, profile: &ProfileSpec, bits: &mut Bits<R>) {
    let two_p = 2.0 * profile.p(state.pos.j);
    let vertical = two_p >= 1.0 || bits.unit_open() <= two_p;
    let delta = if bits.bit() { 1 } else { -1 };
    if vertical {
        state.pos.j += delta;
        state.vertical += 1;
    } else {
        state.pos.k += delta;
        state.horizontal += 1;
    }
    state.steps += 1;
}

/// A profile compiled for repeated runs of at most `n_max` steps.
#[derive(Clone, Debug)]
pub struct Simulator {
    table: StepTable,
    n_max: u64,
}

impl Simulator {
    pub fn new(profile: &ProfileSpec, n_max: u64) -> Self {
        Self {
            table: StepTable::new(profile, n_max),
            n_max,
        }
    }

    pub fn profile(&self) -> &ProfileSpec {
        self.table.profile()
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn run<R: RngCore>(
        &self,
        mechanism: Mechanism,
        n: u64,
        rng: R,
        cfg: &ObserverConfig,
    ) -> Result<WalkSummary> {
        cfg.validate(n)?;
        let mut bits = Bits::new(rng);
        let mut walker = Walker::new(cfg, n);
        walker.snapshot_if_due();
        match mechanism {
            Mechanism::Direct => direct::run(&self.table, n, &mut bits, &mut walker),
            Mechanism::Construction => construction::run(&self.table, n, &mut bits, &mut walker),
        }
        Ok(walker.finish())
    }
}

/// `N` steps of the direct chain from the origin.
pub fn run_direct<R: RngCore>(
    profile: &ProfileSpec,
    n: u64,
    rng: R,
    cfg: &ObserverConfig,
) -> Result<WalkSummary> {
    Simulator::new(profile, n).run(Mechanism::Direct, n, rng, cfg)
}

/// `N` steps of the burst construction from the origin.
pub fn run_construction<R: RngCore>(
    profile: &ProfileSpec,
    n: u64,
    rng: R,
    cfg: &ObserverConfig,
) -> Result<WalkSummary> {
    Simulator::new(profile, n).run(Mechanism::Construction, n, rng, cfg)
}
