//! Class statistics, between/within-class scatter and the Fisher ratio.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dataio::LabeledDataset;
use crate::{Error, Result};

/// Default within-class regularization, `S_W + delta * I`.
pub const DEFAULT_DELTA: f64 = 5e-3;

/// Scatter statistics of a labelled dataset.
///
/// `sb` is the unweighted between-class scatter
/// `sum_j (mean_j - mean)(mean_j - mean)^T`; every class mean counts once
/// regardless of class size. `sw_reg = sw + delta * I` is the within-class
/// scatter used everywhere downstream, and `sw_inv` its inverse.
#[derive(Debug, Clone)]
pub struct ScatterStats {
    /// `C x M`, one row per class.
    pub class_means: DMatrix<f64>,
    pub overall_mean: DVector<f64>,
    pub class_counts: Vec<usize>,
    pub sb: DMatrix<f64>,
    pub sw: DMatrix<f64>,
    pub sw_reg: DMatrix<f64>,
    pub sw_inv: DMatrix<f64>,
    pub delta: f64,
    chol: Cholesky<f64, Dyn>,
}

impl ScatterStats {
    pub fn dim(&self) -> usize {
        self.sb.nrows()
    }

    pub fn n_classes(&self) -> usize {
        self.class_counts.len()
    }

    /// Cholesky factor of `sw_reg`.
    pub fn sw_cholesky(&self) -> &Cholesky<f64, Dyn> {
        &self.chol
    }
}

/// Computes class means, `S_B`, `S_W`, the regularized `S_W + delta I` and its
/// inverse (once, through a Cholesky factorization).
pub fn compute_stats(data: &LabeledDataset, delta: f64) -> Result<ScatterStats> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be finite and >= 0, got {delta}")));
    }
    let x = &data.features;
    let (n, m) = x.shape();
    let c = data.n_classes();

    let counts = data.class_counts();
    let mut class_means = DMatrix::<f64>::zeros(c, m);
    for (r, &label) in data.labels.iter().enumerate() {
        let mut row = class_means.row_mut(label);
        row += x.row(r);
    }
    for (j, &k) in counts.iter().enumerate() {
        let mut row = class_means.row_mut(j);
        row /= k as f64;
    }
    let overall_mean: DVector<f64> = x.row_sum().transpose() / n as f64;

    let mut sb = DMatrix::<f64>::zeros(m, m);
    for j in 0..c {
        let d: DVector<f64> = class_means.row(j).transpose() - &overall_mean;
        sb.ger(1.0, &d, &d, 1.0);
    }
    symmetrize(&mut sb);

    let mut centred = x.clone();
    for (r, &label) in data.labels.iter().enumerate() {
        let mut row = centred.row_mut(r);
        row -= class_means.row(label);
    }
    let mut sw = centred.tr_mul(&centred);
    symmetrize(&mut sw);

    let mut sw_reg = sw.clone();
    for i in 0..m {
        sw_reg[(i, i)] += delta;
    }
    let chol = Cholesky::new(sw_reg.clone()).ok_or(Error::SingularWithinScatter { delta })?;
    let mut sw_inv = chol.inverse();
    symmetrize(&mut sw_inv);
    if sw_inv.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularWithinScatter { delta });
    }

    Ok(ScatterStats {
        class_means,
        overall_mean,
        class_counts: counts,
        sb,
        sw,
        sw_reg,
        sw_inv,
        delta,
        chol,
    })
}

/// `mean_0 - mean_1` for a two-class dataset.
pub fn binary_mean_difference(stats: &ScatterStats) -> Result<DVector<f64>> {
    if stats.n_classes() != 2 {
        return Err(Error::NotBinary(stats.n_classes()));
    }
    Ok((stats.class_means.row(0) - stats.class_means.row(1)).transpose())
}

/// Fisher ratio `v^T S_B v / v^T (S_W + delta I) v`.
pub fn fisher_ratio(v: &DVector<f64>, stats: &ScatterStats) -> Result<f64> {
    if v.len() != stats.dim() {
        return Err(Error::ShapeMismatch {
            expected: stats.dim(),
            got: v.len(),
        });
    }
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(quad_form(&stats.sb, v) / quad_form(&stats.sw_reg, v))
}

pub(crate) fn quad_form(a: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(a * v))
}

pub(crate) fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn dataset(rows: &[[f64; 2]], labels: &[usize]) -> LabeledDataset {
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let c = labels.iter().max().unwrap() + 1;
        LabeledDataset::new(
            DMatrix::from_row_slice(rows.len(), 2, &flat),
            labels.to_vec(),
            (0..c).map(|i| i.to_string()).collect(),
        )
        .unwrap()
    }

    fn random_dataset(seed: u64, n: usize, m: usize, c: usize) -> LabeledDataset {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(n, m, |_, _| rng.random_range(-3.0..3.0));
        let labels = (0..n).map(|i| i % c).collect();
        LabeledDataset::new(x, labels, (0..c).map(|i| i.to_string()).collect()).unwrap()
    }

    #[test]
    fn coincident_class_means() {
        let d = dataset(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], &[0, 0, 1, 1]);
        let s = compute_stats(&d, 0.0).unwrap();
        assert!(s.sb.iter().all(|&v| v == 0.0));
        assert_eq!(s.sw, DMatrix::from_diagonal_element(2, 2, 2.0));
        assert_eq!(s.class_means, DMatrix::zeros(2, 2));
    }

    #[test]
    fn one_point_per_class() {
        // mean (0.5, 0.5); deviations (+-0.5, -+0.5); two outer products
        let d = dataset(&[[1.0, 0.0], [0.0, 1.0]], &[0, 1]);
        let s = compute_stats(&d, 0.1).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert_relative_eq!(s.sb, expected, epsilon = 1e-15);
        assert!(s.sw.iter().all(|&v| v == 0.0));
        assert_eq!(s.sw_reg, DMatrix::from_diagonal_element(2, 2, 0.1));
        assert_relative_eq!(s.sw_inv, DMatrix::from_diagonal_element(2, 2, 10.0), epsilon = 1e-12);
    }

    #[test]
    fn singular_within_scatter_without_regularization() {
        let d = dataset(&[[1.0, 0.0], [0.0, 1.0]], &[0, 1]);
        assert!(matches!(
            compute_stats(&d, 0.0),
            Err(Error::SingularWithinScatter { .. })
        ));
    }

    #[test]
    fn inverse_and_symmetry() {
        let d = random_dataset(3, 40, 5, 3);
        let s = compute_stats(&d, DEFAULT_DELTA).unwrap();
        let prod = &s.sw_reg * &s.sw_inv;
        let err = (prod - DMatrix::identity(5, 5)).abs().max();
        assert!(err < 1e-8, "{err}");
        assert_eq!(s.sb, s.sb.transpose());
        assert_eq!(s.sw, s.sw.transpose());
        assert!(s.sw.clone().symmetric_eigenvalues().min() > -1e-10);
    }

    #[test]
    fn between_scatter_rank_bounded_by_classes_minus_one() {
        let d = random_dataset(11, 60, 6, 3);
        let s = compute_stats(&d, DEFAULT_DELTA).unwrap();
        let sv = s.sb.clone().singular_values();
        let tol = 1e-10 * sv.max();
        assert_eq!(sv.iter().filter(|&&x| x > tol).count(), 2);
    }

    #[test]
    fn trace_matches_direct_accumulation() {
        let d = random_dataset(5, 37, 4, 3);
        let s = compute_stats(&d, 0.0).unwrap();
        let mut total = 0.0;
        for j in 0..3 {
            for r in 0..d.n_samples() {
                if d.labels[r] != j {
                    continue;
                }
                for k in 0..4 {
                    total += (d.features[(r, k)] - s.class_means[(j, k)]).powi(2);
                }
            }
        }
        assert_relative_eq!(s.sw.trace(), total, max_relative = 1e-9);
    }

    #[test]
    fn binary_top_eigenvector_parallel_to_mean_difference() {
        let d = random_dataset(8, 30, 4, 2);
        let s = compute_stats(&d, DEFAULT_DELTA).unwrap();
        let sbv = binary_mean_difference(&s).unwrap();
        let eig = s.sb.clone().symmetric_eigen();
        let top = eig.eigenvalues.imax();
        let v = eig.eigenvectors.column(top).into_owned();
        let cos = v.dot(&sbv).abs() / sbv.norm();
        assert!(cos >= 1.0 - 1e-9, "{cos}");
    }

    #[test]
    fn mean_difference_examples() {
        let d = dataset(&[[1.0, 0.0], [0.0, 1.0]], &[0, 1]);
        let s = compute_stats(&d, 1.0).unwrap();
        assert_eq!(binary_mean_difference(&s).unwrap(), DVector::from_vec(vec![1.0, -1.0]));

        let d = dataset(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], &[0, 0, 1, 1]);
        let s = compute_stats(&d, 1.0).unwrap();
        assert_eq!(binary_mean_difference(&s).unwrap(), DVector::zeros(2));

        let d = random_dataset(1, 9, 2, 3);
        let s = compute_stats(&d, 1.0).unwrap();
        assert!(matches!(binary_mean_difference(&s), Err(Error::NotBinary(3))));
    }

    fn diag_stats(sb: [f64; 2]) -> ScatterStats {
        // S_B = diag(sb), S_W_reg = I
        let d = dataset(&[[1.0, 0.0], [0.0, 1.0]], &[0, 1]);
        let mut s = compute_stats(&d, 1.0).unwrap();
        s.sb = DMatrix::from_diagonal(&DVector::from_vec(sb.to_vec()));
        s
    }

    #[test]
    fn fisher_ratio_diagonal_cases() {
        let s = diag_stats([2.0, 0.0]);
        assert_eq!(fisher_ratio(&DVector::from_vec(vec![1.0, 0.0]), &s).unwrap(), 2.0);
        assert_eq!(fisher_ratio(&DVector::from_vec(vec![0.0, 1.0]), &s).unwrap(), 0.0);
        assert!(matches!(fisher_ratio(&DVector::zeros(2), &s), Err(Error::ZeroVector)));
    }

    #[test]
    fn fisher_ratio_scale_three() {
        let d = random_dataset(21, 25, 3, 3);
        let s = compute_stats(&d, DEFAULT_DELTA).unwrap();
        let v = DVector::from_vec(vec![0.3, -1.2, 0.7]);
        let a = fisher_ratio(&v, &s).unwrap();
        let b = fisher_ratio(&(&v * 3.0), &s).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn fisher_ratio_scale_invariant(
            v in proptest::collection::vec(-5.0f64..5.0, 4),
            c in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3],
        ) {
            prop_assume!(v.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            let d = random_dataset(17, 30, 4, 3);
            let s = compute_stats(&d, DEFAULT_DELTA).unwrap();
            let v = DVector::from_vec(v);
            let a = fisher_ratio(&v, &s).unwrap();
            let b = fisher_ratio(&(&v * c), &s).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }
}
