//! Search budgets and deterministic randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Knobs shared by every budgeted or randomized search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    /// Trial budget for randomized solvers and bounded searches.
    pub budget: u64,
    /// Largest finite enumeration an exhaustive check may perform.
    pub exhaustive: u64,
    /// Number of random sample points for sampled checks.
    pub samples: u64,
    pub seed: u64,
    /// Height / degree bound for random elements of infinite fields.
    pub height: u32,
    /// Consecutive stable additions before a sampled fixpoint is accepted.
    pub patience: u32,
}

impl Default for Policy {
    fn default() -> Self {
        Policy {
            budget: 200,
            exhaustive: 1 << 16,
            samples: 100,
            seed: 0,
            height: 3,
            patience: 8,
        }
    }
}

impl Policy {
    pub fn with_seed(seed: u64) -> Policy {
        Policy {
            seed,
            ..Policy::default()
        }
    }

    /// An independent generator for one named search. Streams with different
    /// labels never share output for the same seed.
    pub fn rng(&self, label: &str) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(label));
        rng
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
