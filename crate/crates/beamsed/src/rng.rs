//! Deterministic seed derivation.
//!
//! Every randomized stage derives its RNG from the master seed plus a domain
//! tag and the indices that identify the work item (clip index, SNR index,
//! fold index, ...). Results are therefore reproducible and independent of
//! evaluation order, which keeps parallel and sequential runs bit-identical.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keep unrelated streams from colliding on equal indices.
pub mod domain {
    pub const AUGMENT: u64 = 0x01;
    pub const SIM_NOISE: u64 = 0x02;
    pub const DOA: u64 = 0x03;
    pub const FOLDS: u64 = 0x04;
    pub const FIT: u64 = 0x05;
    pub const SYNTH: u64 = 0x06;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with a sequence of stream identifiers into one 64-bit seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &p in parts {
        state ^= p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out ^= splitmix64(&mut state);
    }
    out
}

/// Seeded ChaCha stream for a derived work item.
pub fn rng_for(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, parts))
}
