mod common;

use godisc_core::classify::{self, ClassifierKind};
use godisc_core::discriminant::{self, project, Method};
use godisc_core::eval::{per_direction_accuracy, stratified_kfold, subspace_accuracy, EvalOptions};
use godisc_core::LabeledDataset;
use nalgebra::DMatrix;

#[test]
fn yeast_sized_imbalanced_folds_stay_stratified() {
    let counts = [463usize, 429, 244, 163, 51, 44, 35, 30, 20, 5];
    let labels: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
        .collect();
    assert_eq!(labels.len(), 1484);
    let x = DMatrix::from_fn(labels.len(), 1, |i, _| i as f64);
    let data = LabeledDataset::new(x, labels, (0..10).map(|c| format!("c{c}")).collect()).unwrap();
    let folds = stratified_kfold(&data, 10, 42).unwrap();
    for c in 0..10 {
        let per_fold: Vec<usize> = folds
            .iter()
            .map(|(_, test)| test.iter().filter(|&&i| data.labels[i] == c).count())
            .collect();
        let (lo, hi) = (per_fold.iter().min().unwrap(), per_fold.iter().max().unwrap());
        assert!(hi - lo <= 1, "class {c}: {per_fold:?}");
    }
    let sizes: Vec<usize> = folds.iter().map(|(_, t)| t.len()).collect();
    assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
}

#[test]
fn iris_quadratic_per_direction() {
    let data = common::load("iris");
    let r = per_direction_accuracy(&data, "iris", Method::GOLDA, ClassifierKind::GaussianQuadratic, 4, &EvalOptions::default()).unwrap();
    for (got, want) in r.per_direction_acc.iter().zip([1.0, 0.8, 0.90, 0.80]) {
        let got = got.unwrap();
        assert!((got - want).abs() <= 0.1 + 1e-9, "{:?}", r.per_direction_acc);
    }
    let classic = per_direction_accuracy(&data, "iris", Method::ClassicLDA, ClassifierKind::GaussianQuadratic, 4, &EvalOptions::default()).unwrap();
    assert_eq!(&classic.per_direction_acc[2..], &[None, None]);
}

#[test]
fn iris_nearest_neighbour_on_two_directions() {
    let data = common::load("iris");
    let r = subspace_accuracy(&data, "iris", Method::GOLDA, ClassifierKind::KNN, &[2], &EvalOptions::default()).unwrap();
    let mean = r.subspace_acc[0].accuracy.unwrap().mean;
    assert!((mean - 0.98).abs() <= 0.05, "{mean}");
}

#[test]
fn wine_later_directions_still_separate_jointly() {
    // directions 4 and 5 used together classify better than either alone
    let data = common::load("wine");
    let folds = stratified_kfold(&data, 10, 42).unwrap();
    let mut hits = [0usize; 3];
    for (train_idx, test_idx) in &folds {
        let (train, map) = data.subset(train_idx).unwrap();
        let model = discriminant::fit(Method::GOLDA, &train, 5, 5e-3).unwrap();
        let test = data.features.select_rows(test_idx);
        let truth: Vec<usize> = test_idx.iter().map(|&i| data.labels[i]).collect();
        for (slot, dims) in [vec![3], vec![4], vec![3, 4]].iter().enumerate() {
            let sub = model.select(dims).unwrap();
            let clf = classify::fit(ClassifierKind::GaussianQuadratic, &project(&sub, &train.features).unwrap(), &train.labels).unwrap();
            let pred: Vec<usize> = clf
                .predict(&project(&sub, &test).unwrap())
                .unwrap()
                .into_iter()
                .map(|p| map[p])
                .collect();
            hits[slot] += classify::correct(&pred, &truth);
        }
    }
    assert!(hits[2] > hits[0] && hits[2] > hits[1], "{hits:?}");
}

#[test]
fn wine_full_rank_linear_matches_classic_subspace() {
    // The Gaussian linear rule is invariant under invertible linear maps up to
    // the ridge, so GO-LDA with all 13 directions and classic-LDA with C-1 = 2
    // directions land on nearly the same accuracy.
    let data = common::load("wine");
    let opts = EvalOptions::default();
    let go = subspace_accuracy(&data, "wine", Method::GOLDA, ClassifierKind::GaussianLinear, &[13], &opts).unwrap();
    let classic = subspace_accuracy(&data, "wine", Method::ClassicLDA, ClassifierKind::GaussianLinear, &[2], &opts).unwrap();
    let g = go.subspace_acc[0].accuracy.unwrap().mean;
    let c = classic.subspace_acc[0].accuracy.unwrap().mean;
    assert!((g - c).abs() <= 0.02, "go {g} classic {c}");
}

#[test]
fn reports_are_reproducible() {
    let data = common::load("wine");
    let opts = EvalOptions::default();
    let a = per_direction_accuracy(&data, "wine", Method::GOLDA, ClassifierKind::GaussianQuadratic, 8, &opts).unwrap();
    let b = per_direction_accuracy(&data, "wine", Method::GOLDA, ClassifierKind::GaussianQuadratic, 8, &opts).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}
