use rayon::prelude::*;

use super::cv::{stratified_kfold, Fold};
use super::{EvalOptions, EvalReport, MeanStd, SubspaceEntry};
use crate::classify::{self, ClassifierKind};
use crate::dataio::LabeledDataset;
use crate::discriminant::{self, project_onto, DiscriminantModel, Method};
use crate::scatter::{compute_stats, fisher_ratio};
use crate::{Error, Result};

/// Correct predictions and test-set size of one fold.
type Count = (usize, usize);

/// Directions the method can supply on `data`, and whether requests beyond
/// that become N/A entries (classic and Gram–Schmidt LDA) instead of errors.
fn available(method: Method, data: &LabeledDataset) -> (usize, bool) {
    let limit = method.max_directions(data.n_features(), data.n_classes());
    (limit, matches!(method, Method::ClassicLDA | Method::GramSchmidtLDA))
}

/// One fold with the method already fitted on its training rows.
struct FittedFold<'a> {
    data: &'a LabeledDataset,
    model: DiscriminantModel,
    /// Training rows with classes re-encoded to those present.
    train: LabeledDataset,
    /// Maps `train` class indices back to `data` class indices.
    class_map: Vec<usize>,
    test_idx: &'a [usize],
}

impl FittedFold<'_> {
    /// Test-fold hits of `kind` trained on the projection onto `dims`.
    fn classify(&self, dims: &[usize], kind: ClassifierKind, k_neighbors: usize) -> Result<Count> {
        let sub = self.model.select(dims)?;
        let xtr = project_onto(&sub, &self.train.features, dims.len())?;
        let test = self.data.features.select_rows(self.test_idx);
        let xte = project_onto(&sub, &test, dims.len())?;
        let clf = classify::fit_with_neighbors(kind, &xtr, &self.train.labels, k_neighbors)?;
        let predicted: Vec<usize> = clf.predict(&xte)?.into_iter().map(|p| self.class_map[p]).collect();
        let truth: Vec<usize> = self.test_idx.iter().map(|&i| self.data.labels[i]).collect();
        Ok((classify::correct(&predicted, &truth), truth.len()))
    }
}

/// Fits `method` on each training fold and scores it, folds in parallel,
/// results in fold order.
fn run_folds<T, F>(data: &LabeledDataset, splits: &[Fold], method: Method, k: usize, opts: &EvalOptions, score: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&FittedFold<'_>) -> Result<T> + Sync,
{
    splits
        .par_iter()
        .map(|(train_idx, test_idx)| {
            let (train, class_map) = data.subset(train_idx)?;
            let (limit, _) = available(method, &train);
            let model = discriminant::fit(method, &train, k.min(limit), opts.delta)?;
            score(&FittedFold {
                data,
                model,
                train,
                class_map,
                test_idx,
            })
        })
        .collect()
}

/// Mean and population standard deviation of the per-fold accuracies.
fn summarize(counts: &[Count]) -> MeanStd {
    let acc: Vec<f64> = counts.iter().map(|&(c, n)| c as f64 / n as f64).collect();
    let mean = acc.iter().sum::<f64>() / acc.len() as f64;
    let var = acc.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / acc.len() as f64;
    MeanStd { mean, std: var.sqrt() }
}

/// Table-1 protocol: for every direction `n < k`, cross-validated accuracy of
/// `classifier` on the projection onto direction `n` alone. Methods are re-fit
/// on each training fold.
pub fn per_direction_accuracy(
    data: &LabeledDataset,
    dataset: &str,
    method: Method,
    classifier: ClassifierKind,
    k: usize,
    opts: &EvalOptions,
) -> Result<EvalReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("at least one direction must be requested".into()));
    }
    let (limit, na_beyond) = available(method, data);
    if k > limit && !na_beyond {
        return Err(Error::KTooLarge { requested: k, limit });
    }
    let fitted = k.min(limit);
    let splits = stratified_kfold(data, opts.folds, opts.seed)?;
    let per_fold: Vec<Vec<Option<Count>>> = run_folds(data, &splits, method, fitted, opts, |fold| {
        (0..fitted)
            .map(|n| {
                if n >= fold.model.len() {
                    return Ok(None);
                }
                fold.classify(&[n], classifier, opts.k_neighbors).map(Some)
            })
            .collect()
    })?;

    let per_direction_acc = (0..k)
        .map(|n| {
            if n >= fitted {
                return None;
            }
            let counts: Option<Vec<Count>> = per_fold.iter().map(|f| f[n]).collect();
            counts.map(|c| summarize(&c).mean)
        })
        .collect();
    Ok(EvalReport {
        classifier: Some(classifier),
        folds: Some(opts.folds),
        seed: Some(opts.seed),
        per_direction_acc,
        ..EvalReport::empty(dataset, method)
    })
}

/// Table-2 protocol: cross-validated accuracy (mean and std over folds) of
/// `classifier` in the subspace spanned by the first `l` directions, for each
/// `l` in `l_values`.
pub fn subspace_accuracy(
    data: &LabeledDataset,
    dataset: &str,
    method: Method,
    classifier: ClassifierKind,
    l_values: &[usize],
    opts: &EvalOptions,
) -> Result<EvalReport> {
    if l_values.is_empty() {
        return Err(Error::InvalidArgument("no subspace dimensions given".into()));
    }
    if l_values.contains(&0) {
        return Err(Error::InvalidArgument("subspace dimension must be at least 1".into()));
    }
    let (limit, na_beyond) = available(method, data);
    let l_max = *l_values.iter().max().expect("nonempty");
    if l_max > limit && !na_beyond {
        return Err(Error::KTooLarge { requested: l_max, limit });
    }
    let fitted = l_max.min(limit);
    let splits = stratified_kfold(data, opts.folds, opts.seed)?;
    let per_fold: Vec<Vec<Option<Count>>> = run_folds(data, &splits, method, fitted, opts, |fold| {
        l_values
            .iter()
            .map(|&l| {
                if l > fold.model.len() {
                    return Ok(None);
                }
                let dims: Vec<usize> = (0..l).collect();
                fold.classify(&dims, classifier, opts.k_neighbors).map(Some)
            })
            .collect()
    })?;

    let subspace_acc = l_values
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let counts: Option<Vec<Count>> = per_fold.iter().map(|f| f[i]).collect();
            SubspaceEntry {
                l,
                accuracy: counts.map(|c| summarize(&c)),
            }
        })
        .collect();
    Ok(EvalReport {
        classifier: Some(classifier),
        folds: Some(opts.folds),
        seed: Some(opts.seed),
        subspace_acc,
        ..EvalReport::empty(dataset, method)
    })
}

/// Fisher ratio of each of the first `k` directions on the full data set.
/// Classic and Gram–Schmidt LDA stop at `C - 1` entries.
pub fn fisher_curve(data: &LabeledDataset, dataset: &str, method: Method, k: usize, delta: f64) -> Result<EvalReport> {
    let (limit, na_beyond) = available(method, data);
    let k = if na_beyond { k.min(limit) } else { k };
    let stats = compute_stats(data, delta)?;
    let model = discriminant::fit_with_stats(method, data, &stats, k)?;
    let fisher_curve = model
        .directions
        .iter()
        .map(|d| fisher_ratio(d, &stats))
        .collect::<Result<_>>()?;
    Ok(EvalReport {
        fisher_curve,
        ..EvalReport::empty(dataset, method)
    })
}
