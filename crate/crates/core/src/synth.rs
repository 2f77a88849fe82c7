//! Isotropic Gaussian blobs for tests, oracles and timing sweeps.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataio::LabeledDataset;

/// Half-width of the box the class centres are drawn from.
pub const CENTRE_BOX: f64 = 10.0;

/// `n` samples in `R^m` spread over `c` classes (sample `i` gets label `i % c`).
/// Class centres are uniform in `[-10, 10]^m`; each sample adds isotropic
/// Gaussian noise with standard deviation `std`.
///
/// # Panics
/// If `n < c`, `c < 2` or `m == 0`.
pub fn blobs(n: usize, m: usize, c: usize, std: f64, seed: u64) -> LabeledDataset {
    assert!(c >= 2 && n >= c && m >= 1, "blobs need n >= c >= 2 and m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centres = DMatrix::from_fn(c, m, |_, _| rng.random_range(-CENTRE_BOX..=CENTRE_BOX));
    let mut x = DMatrix::zeros(n, m);
    for i in 0..n {
        let j = i % c;
        for f in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            x[(i, f)] = centres[(j, f)] + std * z;
        }
    }
    let labels = (0..n).map(|i| i % c).collect();
    let names = (0..c).map(|j| j.to_string()).collect();
    LabeledDataset::new(x, labels, names).expect("blob data is valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_balance() {
        let d = blobs(103, 4, 5, 1.0, 0);
        assert_eq!((d.n_samples(), d.n_features(), d.n_classes()), (103, 4, 5));
        let counts = d.class_counts();
        assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
    }

    #[test]
    fn seeded() {
        assert_eq!(blobs(20, 3, 2, 1.0, 7), blobs(20, 3, 2, 1.0, 7));
        assert_ne!(blobs(20, 3, 2, 1.0, 7), blobs(20, 3, 2, 1.0, 8));
    }
}
