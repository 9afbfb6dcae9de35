//! Parallel replica execution with deterministic reduction.
//!
//! Replica `r` of a task labelled `label` always draws from
//! `replica_rng(stream_seed(seed, label), r)`, so results do not depend on
//! the number of worker threads. Results come back in replica order.

use anisowalk_core::engine::{derive_seed, label_hash, replica_rng, ReplicaRng};
use rayon::prelude::*;

use crate::error::{LabError, LabResult};

/// Describes how per-replica generators are derived, for output records.
pub const SEED_RULE: &str =
    "replica r of part P of experiment E uses ChaCha8 seeded by splitmix(seed ^ splitmix(fnv1a(\"E/P\"))) on stream r";

pub fn stream_seed(seed: u64, experiment: &str, part: &str) -> u64 {
    derive_seed(seed, label_hash(&format!("{experiment}/{part}")))
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// `jobs = None` uses every available core.
    pub fn new(jobs: Option<usize>) -> LabResult<Self> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = jobs {
            builder = builder.num_threads(j.max(1));
        }
        let pool = builder.build().map_err(|e| LabError::Pool(e.to_string()))?;
        Ok(Self { pool })
    }

    pub fn jobs(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f(r, rng_r)` for `r in 0..count`; results in replica order.
    pub fn replicas<T, F>(&self, count: u64, seed: u64, f: F) -> LabResult<Vec<T>>
    where
        T: Send,
        F: Fn(u64, ReplicaRng) -> LabResult<T> + Sync,
    {
        self.pool.install(|| {
            (0..count)
                .into_par_iter()
                .map(|r| f(r, replica_rng(seed, r)))
                .collect()
        })
    }
}
