//! The chain stepped literally, one transition per step.

use rand_core::RngCore;

use super::rng::Bits;
use super::table::StepTable;
use super::Walker;

pub(super) fn run<R: RngCore>(table: &StepTable, n_total: u64, bits: &mut Bits<R>, w: &mut Walker<'_>) {
    while w.n < n_total {
        let stop = w.stop(n_total);
        while w.n < stop {
            let vertical = table.law(w.j).is_vertical(bits);
            let delta = if bits.bit() { 1 } else { -1 };
            if vertical {
                w.j += delta;
                w.v += 1;
                if w.j == 0 {
                    w.xi2 += 1;
                }
            } else {
                w.k += delta;
                w.h += 1;
            }
            w.n += 1;
            w.arrive();
        }
        w.snapshot_if_due();
    }
}
