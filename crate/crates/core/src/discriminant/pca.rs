use nalgebra::{DMatrix, SymmetricEigen};

use super::{check_k, DiscriminantModel, Method};
use crate::dataio::LabeledDataset;
use crate::eigen::canonical_sign;
use crate::scatter::symmetrize;
use crate::{Error, Result};

/// Leading eigenvectors of the total covariance `(1/N) sum (y_i - m)(y_i - m)^T`.
/// Labels are ignored; `ratios` holds the eigenvalues.
pub fn pca(data: &LabeledDataset, k: usize) -> Result<DiscriminantModel> {
    let m = data.n_features();
    check_k(k, m)?;
    let x = &data.features;
    let mean = x.row_mean();
    let mut centred = x.clone();
    for mut row in centred.row_iter_mut() {
        row -= &mean;
    }
    let mut cov: DMatrix<f64> = centred.tr_mul(&centred) / x.nrows() as f64;
    symmetrize(&mut cov);
    let eig = SymmetricEigen::try_new(cov, f64::EPSILON, 0)
        .ok_or_else(|| Error::ConvergenceFailure("covariance eigensolver".into()))?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut directions = Vec::with_capacity(k);
    let mut ratios = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        let mut v = eig.eigenvectors.column(i).normalize();
        canonical_sign(&mut v);
        directions.push(v);
        ratios.push(eig.eigenvalues[i]);
    }
    Ok(DiscriminantModel {
        method: Method::PCA,
        directions,
        ratios,
        delta: 0.0,
        k_requested: k,
    })
}
