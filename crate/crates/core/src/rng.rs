//! Seed handling. A run has one 64-bit master seed; replicate `r` draws from
//! ChaCha8 stream `r` of that seed, so any replicate can be regenerated alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SpRng = ChaCha8Rng;

pub fn master_rng(seed: u64) -> SpRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn replicate_rng(seed: u64, replicate: u64) -> SpRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}
