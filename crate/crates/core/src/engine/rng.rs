//! Replica random streams and a bit-level reader over them.
//!
//! Every replica draws from its own ChaCha8 stream keyed by
//! `(seed, replica index)`. ChaCha is a counter-based generator, so a
//! replica's numbers never depend on which worker runs it or in what order.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub type ReplicaRng = ChaCha8Rng;

/// The stream for replica `replica` under `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ReplicaRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for a named sub-experiment.
pub fn derive_seed(master: u64, label: u64) -> u64 {
    splitmix64(master ^ splitmix64(label))
}

/// FNV-1a, for turning labels into `derive_seed` inputs.
pub fn label_hash(label: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Buffered bit reader: fair coins cost one bit, not one word.
pub struct Bits<R> {
    rng: R,
    buf: u64,
    left: u32,
}

impl<R: RngCore> Bits<R> {
    pub fn new(rng: R) -> Self {
        Self {
            rng,
            buf: 0,
            left: 0,
        }
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        if self.left == 0 {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.buf & 1;
        self.buf >>= 1;
        self.left -= 1;
        b == 1
    }

    /// `n` fair bits as an integer, `n <= 63`.
    #[inline]
    pub fn bits(&mut self, n: u32) -> u64 {
        debug_assert!(n < 64);
        if n == 0 {
            return 0;
        }
        let mask = (1u64 << n) - 1;
        if self.left >= n {
            let out = self.buf & mask;
            self.buf >>= n;
            self.left -= n;
            return out;
        }
        let low = self.buf;
        let have = self.left;
        self.buf = self.rng.next_u64();
        self.left = 64;
        let need = n - have;
        let high = self.buf & ((1u64 << need) - 1);
        self.buf >>= need;
        self.left -= need;
        (low | (high << have)) & mask
    }

    /// A fresh 64-bit word, bypassing the buffer.
    #[inline]
    pub fn word(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `(0, 1]` with 53-bit resolution.
    #[inline]
    pub fn unit_open(&mut self) -> f64 {
        ((self.word() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Number of failures before the first success in fair trials:
    /// `P(G = k) = 2^{-(k+1)}`.
    #[inline]
    pub fn geometric_half(&mut self) -> u64 {
        let mut g = 0u64;
        loop {
            if self.left == 0 {
                self.buf = self.rng.next_u64();
                self.left = 64;
            }
            let tz = self.buf.trailing_zeros();
            if tz < self.left {
                g += u64::from(tz);
                let used = tz + 1;
                self.buf = if used >= 64 { 0 } else { self.buf >> used };
                self.left -= used;
                return g;
            }
            g += u64::from(self.left);
            self.left = 0;
        }
    }

    /// Sum of `m` independent fair `+1/-1` steps.
    #[inline]
    pub fn displacement(&mut self, m: u64) -> i64 {
        let mut total = 0i64;
        let mut rest = m;
        while rest >= 64 {
            total += 2 * i64::from(self.word().count_ones()) - 64;
            rest -= 64;
        }
        if rest > 0 {
            let r = rest as u32;
            total += 2 * i64::from(self.bits(r).count_ones()) - i64::from(r);
        }
        total
    }
}
