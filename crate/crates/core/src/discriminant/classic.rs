use nalgebra::DVector;

use super::{check_k, DiscriminantModel, Method};
use crate::dataio::LabeledDataset;
use crate::eigen::{canonical_sign, generalized_eig_all};
use crate::scatter::{compute_stats, fisher_ratio, ScatterStats};
use crate::{Error, Result};

/// Norm below which a Gram–Schmidt residual counts as linearly dependent.
const GS_DEGENERATE: f64 = 1e-10;

/// Top `k` generalized eigenvectors of `(S_B, S_W + delta I)`.
pub fn classic_lda(data: &LabeledDataset, k: usize, delta: f64) -> Result<DiscriminantModel> {
    classic_lda_from_stats(&compute_stats(data, delta)?, k)
}

pub fn classic_lda_from_stats(stats: &ScatterStats, k: usize) -> Result<DiscriminantModel> {
    check_k(k, Method::ClassicLDA.max_directions(stats.dim(), stats.n_classes()))?;
    let pairs = generalized_eig_all(&stats.sb, stats)?;
    let directions: Vec<DVector<f64>> = pairs.into_iter().take(k).map(|p| p.vector).collect();
    let ratios = directions
        .iter()
        .map(|v| fisher_ratio(v, stats))
        .collect::<Result<_>>()?;
    Ok(DiscriminantModel {
        method: Method::ClassicLDA,
        directions,
        ratios,
        delta: stats.delta,
        k_requested: k,
    })
}

/// Classic-LDA directions orthonormalized in order; `C - 1` of them (or `M`
/// if fewer features than that).
pub fn gram_schmidt_lda(data: &LabeledDataset, delta: f64) -> Result<DiscriminantModel> {
    gram_schmidt_lda_from_stats(&compute_stats(data, delta)?)
}

pub fn gram_schmidt_lda_from_stats(stats: &ScatterStats) -> Result<DiscriminantModel> {
    let k = Method::GramSchmidtLDA.max_directions(stats.dim(), stats.n_classes());
    let classic = classic_lda_from_stats(stats, k)?;
    let directions = gram_schmidt(&classic.directions)?;
    let ratios = directions
        .iter()
        .map(|v| fisher_ratio(v, stats))
        .collect::<Result<_>>()?;
    Ok(DiscriminantModel {
        method: Method::GramSchmidtLDA,
        directions,
        ratios,
        delta: stats.delta,
        k_requested: k,
    })
}

/// Classical Gram–Schmidt: `w_i = v_i - sum_k <v_i, w_k> w_k / |w_k|^2`,
/// each `w_i` then normalized and sign-fixed.
pub fn gram_schmidt(vectors: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    let mut raw: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    let mut out = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for prev in &raw {
            let c = v.dot(prev) / prev.norm_squared();
            w.axpy(-c, prev, 1.0);
        }
        let norm = w.norm();
        if norm.is_nan() || norm < GS_DEGENERATE {
            return Err(Error::DegenerateDirection { index: i });
        }
        let mut unit = &w / norm;
        canonical_sign(&mut unit);
        raw.push(w);
        out.push(unit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::binary_mean_difference;
    use crate::synth::blobs;

    #[test]
    fn binary_direction_is_regularized_mean_difference() {
        let data = blobs(80, 6, 2, 1.0, 21);
        let stats = compute_stats(&data, 5e-3).unwrap();
        let model = classic_lda_from_stats(&stats, 1).unwrap();
        let d = (&stats.sw_inv * binary_mean_difference(&stats).unwrap()).normalize();
        assert!(model.directions[0].dot(&d).abs() >= 1.0 - 1e-8);
    }

    #[test]
    fn ratios_equal_eigenvalues() {
        let data = blobs(150, 6, 4, 1.0, 2);
        let stats = compute_stats(&data, 5e-3).unwrap();
        let pairs = generalized_eig_all(&stats.sb, &stats).unwrap();
        let model = classic_lda_from_stats(&stats, 3).unwrap();
        for (r, p) in model.ratios.iter().zip(&pairs) {
            assert!((r - p.value).abs() <= 1e-8 * p.value);
        }
    }

    #[test]
    fn three_blobs_in_three_dims_leave_a_null_eigenvalue() {
        let data = blobs(300, 3, 3, 1.0, 4);
        let stats = compute_stats(&data, 5e-3).unwrap();
        let pairs = generalized_eig_all(&stats.sb, &stats).unwrap();
        let model = classic_lda_from_stats(&stats, 2).unwrap();
        assert!(model.ratios[0] >= model.ratios[1] && model.ratios[1] > 0.0);
        assert!(pairs[2].value.abs() < 1e-9 * pairs[0].value);
        assert!(pairs[2].numerically_zero);
    }

    #[test]
    fn k_limit_is_classes_minus_one() {
        let data = blobs(60, 5, 3, 1.0, 1);
        assert!(matches!(
            classic_lda(&data, 3, 5e-3),
            Err(Error::KTooLarge { requested: 3, limit: 2 })
        ));
        assert!(classic_lda(&data, 0, 5e-3).is_err());
    }

    #[test]
    fn gram_schmidt_keeps_orthogonal_input() {
        let e = |i: usize| DVector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 });
        let out = gram_schmidt(&[e(2), e(0)]).unwrap();
        assert_eq!(out, vec![e(2), e(0)]);
    }

    #[test]
    fn gram_schmidt_orthonormalizes() {
        let v = vec![
            DVector::from_vec(vec![1.0, 1.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0, 1.0]),
            DVector::from_vec(vec![0.0, 1.0, 1.0]),
        ];
        let w = gram_schmidt(&v).unwrap();
        for i in 0..3 {
            assert!((w[i].norm() - 1.0).abs() < 1e-14);
            for j in 0..i {
                assert!(w[i].dot(&w[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn duplicated_vector_is_degenerate() {
        let v = DVector::from_vec(vec![0.6, 0.8]);
        assert!(matches!(
            gram_schmidt(&[v.clone(), v]),
            Err(Error::DegenerateDirection { index: 1 })
        ));
    }
}
