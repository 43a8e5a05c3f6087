//! Seed derivation and the sampling stream.
//!
//! Seeds are addressed, never threaded: every class and every image gets its
//! own seed from `(master, class_id, instance_id)`, so output does not depend
//! on generation order or worker count.
//!
//! The stream is ChaCha8 keyed by four SplitMix64 outputs of the seed (little
//! endian). Uniform draws are made here rather than through a distribution
//! library so that their bit-level definition is part of this crate:
//!
//! * unit real: `(next_u64 >> 11) · 2⁻⁵³`, in `[0, 1)`
//! * real in `[lo, hi]`: `lo + (hi − lo) · unit`, `lo` exactly when `lo == hi`
//! * integer in `[lo, hi]`: Lemire's multiply-and-reject on `next_u64`

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

const TAG_ROOT: u64 = 0x7669_7361_746f_6d00; // "visatom\0"
const TAG_CLASS: u64 = 0x0000_0000_636c_6173;
const TAG_INSTANCE: u64 = 0x0000_0000_696e_7374;
const TAG_ORBIT: u64 = 0x0000_0000_6f72_6269;

/// SplitMix64 output function applied to `z + γ`.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn absorb(state: u64, word: u64) -> u64 {
    splitmix64(state ^ word)
}

/// Seed for a class (`instance_id = None`) or for one image of a class.
///
/// Inputs are absorbed in a fixed order through a non-linear mix, so swapping
/// the class and instance ids yields a different seed.
pub fn derive_seed(master_seed: u64, class_id: u64, instance_id: Option<u64>) -> u64 {
    let h = absorb(absorb(TAG_ROOT, master_seed), class_id);
    match instance_id {
        None => absorb(h, TAG_CLASS),
        Some(i) => absorb(absorb(h, TAG_INSTANCE), i),
    }
}

/// Sub-seed for per-orbit draws under a class seed.
pub fn orbit_seed(class_seed: u64, orbit: u64) -> u64 {
    absorb(absorb(class_seed, TAG_ORBIT), orbit)
}

/// Deterministic uniform sampler over a ChaCha8 keystream.
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_exact_mut(8) {
            let w = splitmix64(s);
            s = s.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        Self {
            inner: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        (lo + (hi - lo) * self.unit()).min(hi)
    }

    pub fn int(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo).wrapping_add(1);
        if span == 0 {
            return self.next_u64();
        }
        let mut m = u128::from(self.next_u64()) * u128::from(span);
        if (m as u64) < span {
            let threshold = span.wrapping_neg() % span;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(span);
            }
        }
        lo + (m >> 64) as u64
    }
}
