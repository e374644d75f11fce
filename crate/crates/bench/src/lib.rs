//! Shared fixtures for the benchmarks.

use entfilter_core::random::{random_entangled_state, random_psd};
use entfilter_core::{DensityOperator, Mat4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `n` random PSD operators from a fixed seed.
pub fn psd_operators(n: usize, seed: u64) -> Vec<Mat4> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_psd(&mut rng)).collect()
}

/// `n` random full-rank entangled states from a fixed seed.
pub fn entangled_states(n: usize, seed: u64) -> Vec<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_entangled_state(&mut rng, 1e-3))
        .collect()
}
