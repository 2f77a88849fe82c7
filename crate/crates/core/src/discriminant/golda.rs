use nalgebra::{DMatrix, DVector};

use super::{check_k, max_overlap_with, project_out, DiscriminantModel, Method};
use crate::dataio::LabeledDataset;
use crate::eigen::{canonical_sign, largest_eigenpair_with, EigenOptions};
use crate::scatter::{compute_stats, fisher_ratio, symmetrize, ScatterStats};
use crate::{Error, Result};

/// Overlap with prior directions above which a new direction is projected
/// back onto their orthogonal complement.
const REORTHOGONALIZE_ABOVE: f64 = 1e-12;
/// Overlap that survives re-orthogonalization is an error.
const ORTHOGONALITY_LOSS: f64 = 1e-6;

/// Constraint matrices for step `n`, built from the `n - 1` prior directions.
#[derive(Debug, Clone)]
pub struct ConstraintMatrices {
    /// `M x (n-1)`, prior directions as columns.
    pub u: DMatrix<f64>,
    /// `(n-1) x M`, rows `u_i^T S_W^{-1} S_B`.
    pub b: DMatrix<f64>,
    /// `(n-1) x (n-1)`, entries `u_i^T S_W^{-1} u_j`.
    pub t: DMatrix<f64>,
}

impl ConstraintMatrices {
    /// `U T^{-1} B`, the term subtracted from `S_B` at this step.
    pub fn correction(&self) -> Result<DMatrix<f64>> {
        let chol = self.t.clone().cholesky().ok_or(Error::SingularT)?;
        Ok(&self.u * chol.solve(&self.b))
    }
}

pub fn build_constraints(prior: &[DVector<f64>], stats: &ScatterStats) -> Result<ConstraintMatrices> {
    if prior.is_empty() {
        return Err(Error::InvalidArgument("constraints need at least one prior direction".into()));
    }
    if let Some(bad) = prior.iter().find(|u| u.len() != stats.dim()) {
        return Err(Error::ShapeMismatch {
            expected: stats.dim(),
            got: bad.len(),
        });
    }
    let u = DMatrix::from_columns(prior);
    let w = &stats.sw_inv * &u;
    let mut t = u.tr_mul(&w);
    symmetrize(&mut t);
    if t.clone().cholesky().is_none() {
        return Err(Error::SingularT);
    }
    let b = w.tr_mul(&stats.sb);
    Ok(ConstraintMatrices { u, b, t })
}

/// GO-LDA: `u_1` is the leading classic direction, and each later `u_n` is the
/// leading eigenvector of `S_W^{-1} (S_B - U T^{-1} B)` built from
/// `u_1 .. u_{n-1}`, i.e. the Fisher-ratio maximizer orthogonal to all of them.
pub fn go_lda(data: &LabeledDataset, k: usize, delta: f64) -> Result<DiscriminantModel> {
    go_lda_from_stats(&compute_stats(data, delta)?, k)
}

pub fn go_lda_from_stats(stats: &ScatterStats, k: usize) -> Result<DiscriminantModel> {
    let m = stats.dim();
    check_k(k, Method::GOLDA.max_directions(m, stats.n_classes()))?;
    // every step operator has rank <= C - 1, so a block of C + 1 captures its range
    let opts = EigenOptions::default().with_block_size(stats.n_classes() + 1);

    let mut directions: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut ratios = Vec::with_capacity(k);
    for n in 0..k {
        let operator = if directions.is_empty() {
            stats.sb.clone()
        } else {
            &stats.sb - build_constraints(&directions, stats)?.correction()?
        };
        let pair = largest_eigenpair_with(&operator, stats, &opts)?;
        let u = settle_direction(pair.vector, &directions, n)?;
        ratios.push(fisher_ratio(&u, stats)?);
        directions.push(u);
    }
    Ok(DiscriminantModel {
        method: Method::GOLDA,
        directions,
        ratios,
        delta: stats.delta,
        k_requested: k,
    })
}

/// Enforces orthogonality of a new unit direction against `prior`.
pub(crate) fn settle_direction(
    mut u: DVector<f64>,
    prior: &[DVector<f64>],
    index: usize,
) -> Result<DVector<f64>> {
    if max_overlap_with(&u, prior) > REORTHOGONALIZE_ABOVE {
        project_out(&mut u, prior);
        let norm = u.norm();
        if norm < 1e-8 {
            // the eigenvector lies in span(prior): only possible for a null
            // eigenvalue, where any feasible vector is optimal
            u = complement_vector(prior);
        } else {
            u /= norm;
        }
    }
    let overlap = max_overlap_with(&u, prior);
    if overlap > ORTHOGONALITY_LOSS {
        return Err(Error::OrthogonalityLoss { index, overlap });
    }
    canonical_sign(&mut u);
    Ok(u)
}

/// Unit vector orthogonal to `prior`, from the coordinate axis with the
/// largest residual.
fn complement_vector(prior: &[DVector<f64>]) -> DVector<f64> {
    let m = prior[0].len();
    let mut best = 0;
    let mut best_res = -1.0;
    for i in 0..m {
        let captured: f64 = prior.iter().map(|p| p[i] * p[i]).sum();
        if 1.0 - captured > best_res {
            best_res = 1.0 - captured;
            best = i;
        }
    }
    let mut e = DVector::zeros(m);
    e[best] = 1.0;
    for _ in 0..2 {
        project_out(&mut e, prior);
        e.normalize_mut();
    }
    e
}
