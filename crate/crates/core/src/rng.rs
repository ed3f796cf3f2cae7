//! Seeded random streams. Every random choice in the crate draws from a
//! ChaCha stream derived from the user seed and a fixed purpose tag, so
//! independent consumers never share state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Graph = 1,
    Oracle = 2,
    Angles = 3,
    Layout = 4,
    Test = 99,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
