//! Seeded random streams.
//!
//! Every random draw in an experiment comes from a ChaCha stream keyed by
//! `(master seed, replication index)` and selected by a [`Purpose`] tag, so
//! replications can run in any order or in parallel and still reproduce
//! bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator handed to environments and policies.
pub type RandomSource = ChaCha8Rng;

/// Which consumer a stream is reserved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Drawing the frozen arm means of a randomized environment.
    ArmMeans = 1,
    /// Reward noise produced by the environment.
    Environment = 2,
    /// Internal randomization of the policy.
    Policy = 3,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed reported for replication `run` of an experiment.
pub fn replication_seed(master_seed: u64, run: u64) -> u64 {
    mix(mix(master_seed) ^ run.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Opens the stream for `purpose` under `seed`.
pub fn stream(seed: u64, purpose: Purpose) -> RandomSource {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose as u64);
    rng
}

/// Convenience: the `purpose` stream of replication `run`.
pub fn replication_stream(master_seed: u64, run: u64, purpose: Purpose) -> RandomSource {
    stream(replication_seed(master_seed, run), purpose)
}
