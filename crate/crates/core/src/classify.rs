//! Classifiers over projected data: k-nearest-neighbour and Gaussian
//! discriminants with shared (linear) or per-class (quadratic) covariance.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::scatter::symmetrize;
use crate::{Error, Result};

/// Covariance ridge as a fraction of the mean variance of the training data.
pub const RIDGE_SCALE: f64 = 1e-6;
/// Ridge used when the training data has no variance at all.
pub const RIDGE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    #[serde(rename = "knn")]
    KNN,
    #[serde(rename = "linear")]
    GaussianLinear,
    #[serde(rename = "quadratic")]
    GaussianQuadratic,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 3] = [
        ClassifierKind::KNN,
        ClassifierKind::GaussianLinear,
        ClassifierKind::GaussianQuadratic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::KNN => "knn",
            ClassifierKind::GaussianLinear => "linear",
            ClassifierKind::GaussianQuadratic => "quadratic",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "knn" | "1nn" | "1-nn" => Ok(ClassifierKind::KNN),
            "linear" => Ok(ClassifierKind::GaussianLinear),
            "quadratic" => Ok(ClassifierKind::GaussianQuadratic),
            _ => Err(Error::InvalidArgument(format!(
                "unknown classifier {s:?} (expected knn, linear or quadratic)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Neighbours { x: DMatrix<f64>, labels: Vec<usize> },
    /// Scores are `x^T w_j + bias_j`.
    Linear { weights: DMatrix<f64>, bias: DVector<f64> },
    Quadratic { factors: Vec<Cholesky<f64, Dyn>>, log_norm: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct ClassifierModel {
    pub kind: ClassifierKind,
    pub k_neighbors: usize,
    /// `C x K`.
    pub class_means: DMatrix<f64>,
    /// One pooled matrix for the linear classifier, one per class for the
    /// quadratic one, none for k-NN. Ridge included.
    pub covariances: Vec<DMatrix<f64>>,
    pub priors: Vec<f64>,
    pub cov_ridge: f64,
    fitted: Fitted,
}

/// Fits a classifier on `x` (`N x K`) with labels in `0..C`, every class
/// present. k-NN uses `k = 1`.
pub fn fit(kind: ClassifierKind, x: &DMatrix<f64>, labels: &[usize]) -> Result<ClassifierModel> {
    fit_with_neighbors(kind, x, labels, 1)
}

pub fn fit_with_neighbors(
    kind: ClassifierKind,
    x: &DMatrix<f64>,
    labels: &[usize],
    k_neighbors: usize,
) -> Result<ClassifierModel> {
    let (n, dim) = x.shape();
    if labels.len() != n {
        return Err(Error::Shape(format!("{n} rows but {} labels", labels.len())));
    }
    if n == 0 || dim == 0 {
        return Err(Error::Shape("empty training data".into()));
    }
    if k_neighbors == 0 {
        return Err(Error::InvalidArgument("k_neighbors must be at least 1".into()));
    }
    let c = labels.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![0usize; c];
    for &l in labels {
        counts[l] += 1;
    }
    if let Some(j) = counts.iter().position(|&k| k == 0) {
        return Err(Error::EmptyClass(j.to_string()));
    }

    let mut means = DMatrix::zeros(c, dim);
    for (i, &l) in labels.iter().enumerate() {
        let mut row = means.row_mut(l);
        row += x.row(i);
    }
    for (j, &k) in counts.iter().enumerate() {
        let mut row = means.row_mut(j);
        row /= k as f64;
    }
    let priors: Vec<f64> = counts.iter().map(|&k| k as f64 / n as f64).collect();

    let overall = x.row_mean();
    let mean_var = x
        .row_iter()
        .map(|r| (r - &overall).norm_squared())
        .sum::<f64>()
        / (n * dim) as f64;
    let ridge = if mean_var > 0.0 {
        RIDGE_SCALE * mean_var
    } else {
        RIDGE_FLOOR
    };

    let scatter_of = |j: usize| -> DMatrix<f64> {
        let mut s = DMatrix::zeros(dim, dim);
        for (i, &l) in labels.iter().enumerate() {
            if l == j {
                let d = (x.row(i) - means.row(j)).transpose();
                s.ger(1.0, &d, &d, 1.0);
            }
        }
        s
    };
    let with_ridge = |mut s: DMatrix<f64>| {
        symmetrize(&mut s);
        for i in 0..dim {
            s[(i, i)] += ridge;
        }
        s
    };

    let (covariances, fitted) = match kind {
        ClassifierKind::KNN => (
            Vec::new(),
            Fitted::Neighbours {
                x: x.clone(),
                labels: labels.to_vec(),
            },
        ),
        ClassifierKind::GaussianLinear => {
            let mut pooled = DMatrix::zeros(dim, dim);
            for j in 0..c {
                pooled += scatter_of(j);
            }
            let pooled = with_ridge(pooled / n.saturating_sub(c).max(1) as f64);
            let chol = pooled
                .clone()
                .cholesky()
                .ok_or(Error::DegenerateCovariance { class: None })?;
            let weights = chol.solve(&means.transpose());
            let bias = DVector::from_fn(c, |j, _| {
                -0.5 * means.row(j).dot(&weights.column(j).transpose()) + priors[j].ln()
            });
            (vec![pooled], Fitted::Linear { weights, bias })
        }
        ClassifierKind::GaussianQuadratic => {
            let mut covs = Vec::with_capacity(c);
            let mut factors = Vec::with_capacity(c);
            let mut log_norm = Vec::with_capacity(c);
            for j in 0..c {
                let s = scatter_of(j);
                let s = if counts[j] > 1 {
                    s / (counts[j] - 1) as f64
                } else {
                    s
                };
                let cov = with_ridge(s);
                let chol = cov
                    .clone()
                    .cholesky()
                    .ok_or(Error::DegenerateCovariance { class: Some(j) })?;
                let half_log_det: f64 = chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum();
                log_norm.push(priors[j].ln() - half_log_det);
                factors.push(chol);
                covs.push(cov);
            }
            (covs, Fitted::Quadratic { factors, log_norm })
        }
    };

    Ok(ClassifierModel {
        kind,
        k_neighbors,
        class_means: means,
        covariances,
        priors,
        cov_ridge: ridge,
        fitted,
    })
}

impl ClassifierModel {
    pub fn n_classes(&self) -> usize {
        self.priors.len()
    }

    pub fn dim(&self) -> usize {
        self.class_means.ncols()
    }

    fn check(&self, x: &DMatrix<f64>) -> Result<()> {
        if x.ncols() != self.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.dim(),
                got: x.ncols(),
            });
        }
        Ok(())
    }

    /// `P x C` class scores; the prediction is the row-wise argmax. Gaussian
    /// models give log prior plus log likelihood (the linear one without the
    /// class-independent quadratic term); k-NN gives minus the distance to the
    /// nearest training point of each class.
    pub fn decision_scores(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check(x)?;
        let c = self.n_classes();
        let p = x.nrows();
        Ok(match &self.fitted {
            Fitted::Neighbours { x: train, labels } => {
                let mut s = DMatrix::from_element(p, c, f64::NEG_INFINITY);
                for q in 0..p {
                    for (i, &l) in labels.iter().enumerate() {
                        let d = -(train.row(i) - x.row(q)).norm();
                        if d > s[(q, l)] {
                            s[(q, l)] = d;
                        }
                    }
                }
                s
            }
            Fitted::Linear { weights, bias } => {
                let mut s = x * weights;
                for mut row in s.row_iter_mut() {
                    row += bias.transpose();
                }
                s
            }
            Fitted::Quadratic { factors, log_norm } => {
                let mut s = DMatrix::zeros(p, c);
                for (j, chol) in factors.iter().enumerate() {
                    let mut diff = x.transpose();
                    for mut col in diff.column_iter_mut() {
                        col -= self.class_means.row(j).transpose();
                    }
                    let z = chol
                        .l_dirty()
                        .solve_lower_triangular(&diff)
                        .expect("Cholesky factor has a positive diagonal");
                    for q in 0..p {
                        s[(q, j)] = log_norm[j] - 0.5 * z.column(q).norm_squared();
                    }
                }
                s
            }
        })
    }

    pub fn predict(&self, x: &DMatrix<f64>) -> Result<Vec<usize>> {
        self.check(x)?;
        if let Fitted::Neighbours { x: train, labels } = &self.fitted {
            return Ok((0..x.nrows())
                .map(|q| knn_vote(train, labels, self.n_classes(), x.row(q).transpose(), self.k_neighbors))
                .collect());
        }
        let scores = self.decision_scores(x)?;
        Ok(scores.row_iter().map(|r| argmax_first(r.iter().copied())).collect())
    }
}

/// Majority vote among the `k` nearest training points. Distance ties go to
/// the lower training index, vote ties to the lower class index.
fn knn_vote(train: &DMatrix<f64>, labels: &[usize], c: usize, q: DVector<f64>, k: usize) -> usize {
    let dist = |i: usize| (train.row(i).transpose() - &q).norm_squared();
    if k == 1 {
        let mut best = 0;
        let mut best_d = dist(0);
        for i in 1..labels.len() {
            let d = dist(i);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        return labels[best];
    }
    let mut order: Vec<(f64, usize)> = (0..labels.len()).map(|i| (dist(i), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut votes = vec![0usize; c];
    for &(_, i) in order.iter().take(k) {
        votes[labels[i]] += 1;
    }
    argmax_first(votes.iter().map(|&v| v as f64))
}

fn argmax_first(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// Fraction of `predicted` equal to `truth`.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    correct(predicted, truth) as f64 / truth.len() as f64
}

pub fn correct(predicted: &[usize], truth: &[usize]) -> usize {
    predicted.iter().zip(truth).filter(|(a, b)| a == b).count()
}
