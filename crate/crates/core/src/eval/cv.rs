use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataio::LabeledDataset;
use crate::{Error, Result};

/// `(train, test)` row indices of one fold, both ascending.
pub type Fold = (Vec<usize>, Vec<usize>);

/// Stratified `folds`-way split. Each class is shuffled with a generator seeded
/// from `seed` and dealt round-robin over the folds, continuing from the fold
/// where the previous class stopped, so per-class and total fold sizes both
/// differ by at most one.
pub fn stratified_kfold(data: &LabeledDataset, folds: usize, seed: u64) -> Result<Vec<Fold>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    let n = data.n_samples();
    if n < folds {
        return Err(Error::TooFewSamples { samples: n, folds });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); data.n_classes()];
    for (i, &l) in data.labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; n];
    let mut next = 0;
    for (class, members) in by_class.iter_mut().enumerate() {
        if members.len() < folds {
            log::warn!(
                "class {:?} has {} samples for {folds} folds; some test folds will not contain it",
                data.class_names[class],
                members.len()
            );
        }
        members.shuffle(&mut rng);
        for (i, &row) in members.iter().enumerate() {
            fold_of[row] = (next + i) % folds;
        }
        next = (next + members.len()) % folds;
    }
    Ok((0..folds)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| fold_of[i] == f);
            (train, test)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn labelled(counts: &[usize]) -> LabeledDataset {
        let labels: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
            .collect();
        let x = DMatrix::from_fn(labels.len(), 1, |i, _| i as f64);
        let names = (0..counts.len()).map(|c| format!("c{c}")).collect();
        LabeledDataset::new(x, labels, names).unwrap()
    }

    #[test]
    fn balanced_binary_five_folds() {
        let data = labelled(&[5, 5]);
        for (train, test) in stratified_kfold(&data, 5, 42).unwrap() {
            assert_eq!(test.len(), 2);
            assert_eq!(train.len(), 8);
            let classes: Vec<usize> = test.iter().map(|&i| data.labels[i]).collect();
            assert!(classes.contains(&0) && classes.contains(&1));
        }
    }

    #[test]
    fn partition_and_determinism() {
        let data = labelled(&[13, 7, 22]);
        let a = stratified_kfold(&data, 4, 9).unwrap();
        assert_eq!(a, stratified_kfold(&data, 4, 9).unwrap());
        assert_ne!(a, stratified_kfold(&data, 4, 10).unwrap());
        let mut all: Vec<usize> = a.iter().flat_map(|(_, t)| t.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..42).collect::<Vec<_>>());
        for (train, test) in &a {
            assert_eq!(train.len() + test.len(), 42);
            assert!(train.iter().all(|i| !test.contains(i)));
        }
    }

    #[test]
    fn too_few_samples() {
        let data = labelled(&[2, 2]);
        assert!(matches!(
            stratified_kfold(&data, 5, 0),
            Err(Error::TooFewSamples { samples: 4, folds: 5 })
        ));
        assert!(stratified_kfold(&data, 1, 0).is_err());
    }
}
