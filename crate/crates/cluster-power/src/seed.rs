//! Stable seed derivation for reproducible, order-independent simulation.
//!
//! Every Monte-Carlo iteration gets its own seed derived from the master seed
//! and a condition identifier, so cells and iterations can run in any order
//! (or in parallel) and still produce identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over a byte string. Stable across platforms and Rust versions,
/// unlike `DefaultHasher`.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Derives a child seed from a parent seed and a textual context label.
pub fn derive_seed(parent: u64, context: &str) -> u64 {
    let mut h = fnv1a(context.as_bytes());
    h ^= parent;
    h = h.wrapping_mul(FNV_PRIME);
    // splitmix64 finalizer to spread low-entropy inputs
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

/// Derives a per-iteration seed from (master seed, condition id, iteration index).
pub fn iteration_seed(master: u64, condition_id: &str, iteration: usize) -> u64 {
    derive_seed(derive_seed(master, condition_id), &format!("iter:{iteration}"))
}

/// The RNG used throughout: small-round ChaCha, fully determined by its seed.
pub type SimRng = ChaCha8Rng;

/// Builds the simulation RNG from a derived seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
