//! Shared fixtures for the criterion benches.

use godisc_core::scatter::{compute_stats, DEFAULT_DELTA};
use godisc_core::synth::blobs;
use godisc_core::ScatterStats;

pub const SEED: u64 = 42;

/// Scatter statistics of `n` isotropic blobs in `m` dimensions split over `c` classes.
pub fn stats(n: usize, m: usize, c: usize) -> ScatterStats {
    compute_stats(&blobs(n, m, c, 1.0, SEED), DEFAULT_DELTA).expect("blob scatter is well posed")
}
