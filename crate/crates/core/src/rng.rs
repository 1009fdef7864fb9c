//! Seeded random streams.
//!
//! Every randomized operation takes an explicit seed and derives its
//! generator through [`stream_rng`], so results are reproducible and
//! independent of worker count: stream `i` yields the same draws whether
//! replications run serially or in parallel.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for logical stream `stream` of the given seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    // fixed domain tag keeps (seed, stream) pairs from colliding with
    // plain seed_from_u64 generators elsewhere
    key[16..32].copy_from_slice(b"xfield-stream-v1");
    ChaCha8Rng::from_seed(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_seed_same_stream_identical() {
        let mut a = stream_rng(7, 3);
        let mut b = stream_rng(7, 3);
        let xs: Vec<u64> = (0..16).map(|_| a.random()).collect();
        let ys: Vec<u64> = (0..16).map(|_| b.random()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn streams_are_distinct() {
        let mut a = stream_rng(7, 0);
        let mut b = stream_rng(7, 1);
        let xs: Vec<u64> = (0..4).map(|_| a.random()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.random()).collect();
        assert_ne!(xs, ys);
    }
}
