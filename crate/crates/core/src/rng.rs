//! Deterministic random-number streams.
//!
//! All randomness in the engine flows from a single `u64` seed. Each
//! stochastic routine asks for a stream by role name and index; the stream key
//! is SHA-256(seed, role, index), so streams never overlap and results depend
//! only on (seed, inputs), never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// Counter-based generator used everywhere in the engine.
pub type Stream = ChaCha12Rng;

/// Derives the stream for (`seed`, `role`, `index`).
///
/// The same triple always yields the same stream; any change to the triple
/// yields a statistically independent one.
pub fn stream(seed: u64, role: &str, index: u64) -> Stream {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(role.as_bytes());
    hasher.update([0x1f]);
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha12Rng::from_seed(key)
}
