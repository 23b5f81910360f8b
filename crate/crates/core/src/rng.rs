//! Counter-based random streams.
//!
//! Every stochastic task draws from a ChaCha stream keyed by a master seed and
//! a stream id, so results never depend on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Independent stream `stream` under `master_seed`.
pub fn stream(master_seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// splitmix64 finaliser; used to fold structured ids into one stream id.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id for a (group, index) pair, e.g. (effect count, sample index).
pub fn stream_id(group: u64, index: u64) -> u64 {
    mix(mix(group) ^ index)
}
