mod common;

use approx::assert_relative_eq;
use godisc_core::discriminant::{
    classic_lda_from_stats, foley_sammon_from_stats, go_lda_from_stats, gram_schmidt_lda_from_stats, project,
};
use godisc_core::scatter::{binary_mean_difference, compute_stats, fisher_ratio, DEFAULT_DELTA};
use godisc_core::synth::blobs;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn step_optimality_against_random_feasible_vectors() {
    for (seed, m) in [(1u64, 3usize), (2, 4), (3, 5), (4, 5)] {
        let data = blobs(150, m, 3, 2.0, seed);
        let stats = compute_stats(&data, DEFAULT_DELTA).unwrap();
        let model = go_lda_from_stats(&stats, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 77);
        for n in 1..m {
            let prior = &model.directions[..n];
            let mut best = 0.0f64;
            for _ in 0..100_000 {
                let w = common::random_feasible(&mut rng, m, prior);
                best = best.max(fisher_ratio(&w, &stats).unwrap());
            }
            let got = model.ratios[n];
            assert!(got >= best - 1e-3 * got, "M={m} n={} ratio {got} < search {best}", n + 1);
        }
    }
}

#[test]
fn classic_directions_on_wine_are_not_orthogonal() {
    let stats = compute_stats(&common::load("wine"), DEFAULT_DELTA).unwrap();
    let model = classic_lda_from_stats(&stats, 2).unwrap();
    assert!(model.directions[0].dot(&model.directions[1]).abs() > 1e-3);
}

#[test]
fn wine_gram_schmidt_second_direction_is_dominated() {
    let stats = compute_stats(&common::load("wine"), DEFAULT_DELTA).unwrap();
    let gs = gram_schmidt_lda_from_stats(&stats).unwrap();
    let go = go_lda_from_stats(&stats, 2).unwrap();
    assert!(gs.directions[0].dot(&gs.directions[1]).abs() < 1e-12);
    assert!(go.ratios[1] >= gs.ratios[1] - 1e-9);
}

#[test]
fn first_directions_agree_across_methods() {
    let data = blobs(200, 9, 2, 1.0, 12);
    let stats = compute_stats(&data, DEFAULT_DELTA).unwrap();
    let v = &classic_lda_from_stats(&stats, 1).unwrap().directions[0];
    let u = &go_lda_from_stats(&stats, 1).unwrap().directions[0];
    let d = &foley_sammon_from_stats(&stats, 1).unwrap().directions[0];
    for (a, b) in [(v, u), (v, d), (u, d)] {
        assert!(a.dot(b).abs() >= 1.0 - 1e-8);
    }
}

#[test]
fn binary_go_lda_matches_foley_sammon() {
    for seed in 0..5u64 {
        let data = blobs(120, 6, 2, 2.0, 40 + seed);
        let stats = compute_stats(&data, DEFAULT_DELTA).unwrap();
        let go = go_lda_from_stats(&stats, 3).unwrap();
        let fs = foley_sammon_from_stats(&stats, 3).unwrap();
        for (u, d) in go.directions.iter().zip(&fs.directions) {
            assert!(u.dot(d).abs() >= 1.0 - 1e-6, "seed {seed}: cos {}", u.dot(d));
        }
        let sb = binary_mean_difference(&stats).unwrap();
        assert!(go.directions[0].dot(&(&stats.sw_inv * sb).normalize()).abs() >= 1.0 - 1e-8);
    }
}

#[test]
fn go_lda_beyond_class_limit_on_wine() {
    let stats = compute_stats(&common::load("wine"), DEFAULT_DELTA).unwrap();
    let model = go_lda_from_stats(&stats, 13).unwrap();
    assert_eq!(model.len(), 13);
    assert!(model.ratios.iter().all(|r| r.is_finite() && *r >= 0.0));
    assert!(model.ratios[..8].iter().all(|&r| r > 0.0));
    assert!(model.max_overlap() <= 1e-8);
    for w in model.ratios.windows(2) {
        assert!(w[1] <= w[0] + 1e-9);
    }
    for (d, &r) in model.directions.iter().zip(&model.ratios) {
        assert_relative_eq!(fisher_ratio(d, &stats).unwrap(), r, max_relative = 1e-7);
    }
    let w = DMatrix::from_columns(&model.directions);
    let p = project(&model, &w.transpose()).unwrap();
    assert!((p - DMatrix::identity(13, 13)).amax() <= 1e-8);
}

#[test]
fn go_lda_full_basis_on_digits() {
    let stats = compute_stats(&common::load("digits"), DEFAULT_DELTA).unwrap();
    let model = go_lda_from_stats(&stats, 64).unwrap();
    assert_eq!(model.len(), 64);
    assert!(model.max_overlap() <= 1e-8, "overlap {}", model.max_overlap());
    for d in &model.directions {
        assert_relative_eq!(d.norm(), 1.0, epsilon = 1e-10);
    }
    for w in model.ratios.windows(2) {
        assert!(w[1] <= w[0] + 1e-9, "{:?}", model.ratios);
    }
    assert!(model.ratios.iter().all(|r| r.is_finite() && *r >= 0.0));
}

#[test]
fn gram_schmidt_dominance_on_digits() {
    let stats = compute_stats(&common::load("digits"), DEFAULT_DELTA).unwrap();
    let gs = gram_schmidt_lda_from_stats(&stats).unwrap();
    let go = go_lda_from_stats(&stats, 9).unwrap();
    for n in 0..9 {
        assert!(go.ratios[n] >= gs.ratios[n] - 1e-9, "n={}", n + 1);
    }
}

#[test]
fn foley_sammon_complete_basis() {
    let data = blobs(100, 6, 2, 1.5, 77);
    let stats = compute_stats(&data, DEFAULT_DELTA).unwrap();
    let fs = foley_sammon_from_stats(&stats, 6).unwrap();
    let w = DMatrix::from_columns(&fs.directions);
    assert!((w.tr_mul(&w) - DMatrix::identity(6, 6)).amax() <= 1e-7);
}
