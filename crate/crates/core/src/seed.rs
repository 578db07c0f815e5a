//! Seed derivation.
//!
//! Every random choice in a run flows from one user seed. Components get
//! their own stream through [`derive_seed`]: trial `i` of an experiment uses
//! `base + i`, and inside a trial the split and the coding matrix use
//! `derive_seed(trial_seed, SPLIT_STREAM)` and
//! `derive_seed(trial_seed, MATRIX_STREAM)`.

/// Seed used when none is given on the command line.
pub const DEFAULT_SEED: u64 = 1;

pub const SPLIT_STREAM: u64 = 1;
pub const MATRIX_STREAM: u64 = 2;

/// SplitMix64 finaliser applied to `seed` offset by `stream`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
