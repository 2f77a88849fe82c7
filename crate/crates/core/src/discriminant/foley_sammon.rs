use nalgebra::{DMatrix, DVector};

use super::golda::settle_direction;
use super::{check_k, DiscriminantModel, Method};
use crate::dataio::LabeledDataset;
use crate::scatter::{binary_mean_difference, compute_stats, fisher_ratio, symmetrize, ScatterStats};
use crate::{Error, Result};

/// Foley–Sammon recursion for two classes:
/// `d_1 = alpha_1 S_W^{-1} s_b`, and
/// `d_n = alpha_n S_W^{-1} (s_b - D S^{-1} (1/alpha_1, 0, ..., 0)^T)`
/// with `D = [d_1 .. d_{n-1}]` and `S = D^T S_W^{-1} D`.
pub fn foley_sammon(data: &LabeledDataset, k: usize, delta: f64) -> Result<DiscriminantModel> {
    foley_sammon_from_stats(&compute_stats(data, delta)?, k)
}

pub fn foley_sammon_from_stats(stats: &ScatterStats, k: usize) -> Result<DiscriminantModel> {
    let sb = binary_mean_difference(stats)?;
    check_k(k, Method::FoleySammon.max_directions(stats.dim(), 2))?;

    let w1 = &stats.sw_inv * &sb;
    let norm1 = w1.norm();
    if norm1 == 0.0 {
        return Err(Error::DegenerateDirection { index: 0 });
    }
    let inv_alpha1 = norm1;
    let mut raw: Vec<DVector<f64>> = vec![w1 / norm1];

    for n in 2..=k {
        let d = DMatrix::from_columns(&raw);
        let mut s = d.tr_mul(&(&stats.sw_inv * &d));
        symmetrize(&mut s);
        let chol = s
            .cholesky()
            .ok_or(Error::SingularRecursionMatrix { step: n })?;
        let mut rhs = DVector::zeros(n - 1);
        rhs[0] = inv_alpha1;
        let coef = chol.solve(&rhs);
        let w = &stats.sw_inv * (&sb - &d * coef);
        let norm = w.norm();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::DegenerateDirection { index: n - 1 });
        }
        raw.push(w / norm);
    }

    // the recursion depends on the sign of d_1, so canonical signs are applied afterwards
    let mut directions = Vec::with_capacity(k);
    for (i, d) in raw.into_iter().enumerate() {
        directions.push(settle_direction(d, &directions, i)?);
    }
    let ratios = directions
        .iter()
        .map(|v| fisher_ratio(v, stats))
        .collect::<Result<_>>()?;
    Ok(DiscriminantModel {
        method: Method::FoleySammon,
        directions,
        ratios,
        delta: stats.delta,
        k_requested: k,
    })
}
