//! Sparse local-time field.

use hashbrown::HashMap;

use super::Site;
use crate::{Error, Result};

/// Bytes charged per occupied site when checking the memory budget.
pub const BYTES_PER_SITE: u64 = 32;

/// Visit counts per site over times `1..=N` (time 0 is not a visit).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalTimeField {
    counts: HashMap<u64, u64>,
    window: Option<u32>,
    total: u64,
}

// Two signed 32-bit coordinates in one word.
#[inline]
pub(crate) fn pack(site: Site) -> u64 {
    ((site.k as i32 as u32 as u64) << 32) | (site.j as i32 as u32 as u64)
}

#[inline]
pub(crate) fn unpack(key: u64) -> Site {
    Site::new((key >> 32) as u32 as i32 as i64, key as u32 as i32 as i64)
}

impl LocalTimeField {
    pub fn new(window: Option<u32>) -> Self {
        Self {
            counts: HashMap::new(),
            window,
            total: 0,
        }
    }

    fn in_window(&self, site: Site) -> bool {
        match self.window {
            Some(r) => site.k.unsigned_abs() <= u64::from(r) && site.j.unsigned_abs() <= u64::from(r),
            None => true,
        }
    }

    #[inline]
    pub(crate) fn record(&mut self, site: Site) {
        if self.in_window(site) {
            *self.counts.entry(pack(site)).or_insert(0) += 1;
            self.total += 1;
        }
    }

    /// `Xi(site, N)`.
    pub fn local_time(&self, site: Site) -> Result<u64> {
        if !self.in_window(site) {
            return Err(Error::OutsideWindow {
                k: site.k,
                j: site.j,
                radius: self.window.unwrap_or(0),
            });
        }
        Ok(self.counts.get(&pack(site)).copied().unwrap_or(0))
    }

    /// `R(N)`: sites with positive local time.
    pub fn range(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Sum of all recorded visits.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn window(&self) -> Option<u32> {
        self.window
    }

    pub fn iter(&self) -> impl Iterator<Item = (Site, u64)> + '_ {
        self.counts.iter().map(|(k, v)| (unpack(*k), *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn pack_roundtrip(k in i32::MIN as i64..=i32::MAX as i64, j in i32::MIN as i64..=i32::MAX as i64) {
            let s = Site::new(k, j);
            prop_assert_eq!(unpack(pack(s)), s);
        }
    }

    #[test]
    fn window_queries() {
        let mut f = LocalTimeField::new(Some(2));
        f.record(Site::new(1, 1));
        f.record(Site::new(1, 1));
        f.record(Site::new(5, 0));
        assert_eq!(f.local_time(Site::new(1, 1)), Ok(2));
        assert_eq!(f.local_time(Site::new(0, 0)), Ok(0));
        assert!(matches!(f.local_time(Site::new(5, 0)), Err(Error::OutsideWindow { .. })));
        assert_eq!(f.range(), 1);
        assert_eq!(f.total(), 2);
    }
}
