//! Child-seed derivation.
//!
//! Every random draw in an experiment comes from a ChaCha8 stream seeded by
//! `child_seed(master, set, stream, grid_index, repetition)`:
//!
//! ```text
//! h = splitmix64(master)
//! for v in [set, stream, grid_index, repetition]:
//!     h = splitmix64(h ^ v)
//! ```
//!
//! where `splitmix64` is the standard finalizer with increment
//! `0x9E3779B97F4A7C15`. Streams: 0 system, 1 environment, 2 calibration,
//! 3 ancilla diagnostic.

pub const STREAM_SYSTEM: u64 = 0;
pub const STREAM_ENVIRONMENT: u64 = 1;
pub const STREAM_CALIBRATION: u64 = 2;
pub const STREAM_DIAGNOSTIC: u64 = 3;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child_seed(master: u64, set: u64, stream: u64, grid_index: u64, repetition: u64) -> u64 {
    [set, stream, grid_index, repetition]
        .into_iter()
        .fold(splitmix64(master), |h, v| splitmix64(h ^ v))
}
