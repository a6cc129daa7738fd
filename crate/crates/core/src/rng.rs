//! Deterministic, splittable seeding.
//!
//! Ensemble sample `k` derives its own stream from `seed.child(k)`, so
//! results never depend on evaluation order or worker count. The child
//! derivation and the stream-key expansion are both the SplitMix64
//! counter/finalizer construction, pinned here rather than delegated to
//! library internals so that streams are stable across dependency upgrades.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Master seed for all randomized operations.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    /// Sub-seed for item `index` of an ensemble: hash(master, index).
    pub fn child(self, index: u64) -> Self {
        let folded = self
            .master
            .wrapping_add(GAMMA)
            .wrapping_add(mix(index.wrapping_mul(GAMMA).wrapping_add(GAMMA)));
        Self::new(mix(folded))
    }

    /// Fresh ChaCha12 stream keyed by this seed.
    pub(crate) fn rng(self) -> ChaCha12Rng {
        let mut key = [0u8; 32];
        let mut state = self.master;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GAMMA);
            chunk.copy_from_slice(&mix(state).to_le_bytes());
        }
        ChaCha12Rng::from_seed(key)
    }
}

impl From<u64> for Seed {
    fn from(master: u64) -> Self {
        Self::new(master)
    }
}
