//! The burst construction with two shortcuts that leave the law intact.
//!
//! Without a field, horizontal steps taken on rows that hold no tracked site
//! are only counted; their net displacement is drawn in one go (a popcount)
//! when the walk next needs `k`. Runs of fair vertical steps through rows
//! with `p = 1/2`, far from any tracked row, are taken 64 or 8 at a time.

use rand_core::RngCore;

use super::rng::Bits;
use super::table::StepTable;
use super::Walker;

const MACRO_WIDE: u64 = 64;
const MACRO_NARROW: u64 = 8;

#[inline]
fn settle<R: RngCore>(w: &mut Walker<'_>, pending: &mut u64, bits: &mut Bits<R>) {
    if *pending > 0 {
        w.k += bits.displacement(*pending);
        *pending = 0;
    }
}

pub(super) fn run<R: RngCore>(table: &StepTable, n_total: u64, bits: &mut Bits<R>, w: &mut Walker<'_>) {
    let keep_field = w.field.is_some();
    let mut pending = 0u64;
    // Horizontal steps still owed at the current row before its vertical step.
    let mut burst_left: Option<u64> = None;

    while w.n < n_total {
        let stop = w.stop(n_total);
        let law = table.law(w.j);

        if !keep_field && burst_left.is_none() {
            let room = stop - w.n;
            let quiet = u64::from(law.quiet);
            let chunk = if quiet >= MACRO_WIDE && room >= MACRO_WIDE {
                MACRO_WIDE
            } else if quiet >= MACRO_NARROW && room >= MACRO_NARROW {
                MACRO_NARROW
            } else {
                0
            };
            if chunk > 0 && w.tracked_row_distance(w.j) > chunk {
                w.j += bits.displacement(chunk);
                w.v += chunk;
                w.n += chunk;
                if w.n == stop {
                    settle(w, &mut pending, bits);
                    w.snapshot_if_due();
                }
                continue;
            }
        }

        let g = match burst_left.take() {
            Some(g) => g,
            None => law.burst(bits),
        };
        let m = g.min(stop - w.n);
        if m > 0 {
            if keep_field {
                for _ in 0..m {
                    w.k += if bits.bit() { 1 } else { -1 };
                    w.n += 1;
                    w.arrive();
                }
            } else if w.tracked_row_distance(w.j) == 0 {
                settle(w, &mut pending, bits);
                if w.target_within(m) {
                    for _ in 0..m {
                        w.k += if bits.bit() { 1 } else { -1 };
                        w.n += 1;
                        w.arrive();
                    }
                } else {
                    w.k += bits.displacement(m);
                    w.n += m;
                }
            } else {
                pending += m;
                w.n += m;
            }
            w.h += m;
        }
        if w.n == stop {
            burst_left = Some(g - m);
            settle(w, &mut pending, bits);
            w.snapshot_if_due();
            continue;
        }

        w.j += if bits.bit() { 1 } else { -1 };
        w.v += 1;
        w.n += 1;
        if w.j == 0 {
            w.xi2 += 1;
        }
        if keep_field || w.tracked_row_distance(w.j) == 0 {
            settle(w, &mut pending, bits);
            w.arrive();
        }
        if w.n == stop {
            settle(w, &mut pending, bits);
            w.snapshot_if_due();
        }
    }
    settle(w, &mut pending, bits);
}
