//! Subspace methods and projection.
//!
//! Every method returns a [`DiscriminantModel`]: an ordered list of unit
//! directions with the Fisher ratio of each (explained variance for PCA).

mod classic;
mod foley_sammon;
mod golda;
mod pca;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataio::LabeledDataset;
use crate::scatter::{compute_stats, ScatterStats};
use crate::{Error, Result};

pub use classic::{classic_lda, classic_lda_from_stats, gram_schmidt, gram_schmidt_lda, gram_schmidt_lda_from_stats};
pub use foley_sammon::{foley_sammon, foley_sammon_from_stats};
pub use golda::{build_constraints, go_lda, go_lda_from_stats, ConstraintMatrices};
pub use pca::pca;

/// Tolerated `|u_i . u_j|` for methods that promise orthogonal directions.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "classic-lda")]
    ClassicLDA,
    #[serde(rename = "gs-lda")]
    GramSchmidtLDA,
    #[serde(rename = "go-lda")]
    GOLDA,
    #[serde(rename = "foley-sammon")]
    FoleySammon,
    #[serde(rename = "pca")]
    PCA,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::ClassicLDA,
        Method::GramSchmidtLDA,
        Method::GOLDA,
        Method::FoleySammon,
        Method::PCA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ClassicLDA => "classic-lda",
            Method::GramSchmidtLDA => "gs-lda",
            Method::GOLDA => "go-lda",
            Method::FoleySammon => "foley-sammon",
            Method::PCA => "pca",
        }
    }

    /// Most directions the method can produce for `m` features and `c` classes.
    pub fn max_directions(self, m: usize, c: usize) -> usize {
        match self {
            Method::ClassicLDA | Method::GramSchmidtLDA => (c - 1).min(m),
            Method::GOLDA | Method::FoleySammon | Method::PCA => m,
        }
    }

    /// Whether the method's directions are mutually orthogonal.
    pub fn is_orthogonal(self) -> bool {
        !matches!(self, Method::ClassicLDA)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method {s:?} (expected one of classic-lda, gs-lda, go-lda, foley-sammon, pca)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantModel {
    pub method: Method,
    pub directions: Vec<DVector<f64>>,
    /// Fisher ratio of each direction; explained variance for PCA.
    pub ratios: Vec<f64>,
    pub delta: f64,
    pub k_requested: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    method: Method,
    delta: f64,
    k_requested: usize,
    n_features: usize,
    /// One row per direction.
    directions: Vec<Vec<f64>>,
    ratios: Vec<f64>,
}

impl DiscriminantModel {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.directions.first().map_or(0, |d| d.len())
    }

    /// `M x l` matrix with the first `l` directions as columns.
    pub fn basis(&self, l: usize) -> Result<DMatrix<f64>> {
        if l == 0 || l > self.len() {
            return Err(Error::InvalidArgument(format!(
                "subspace dimension {l} outside 1..={}",
                self.len()
            )));
        }
        Ok(DMatrix::from_columns(&self.directions[..l]))
    }

    /// Model restricted to the directions at `indices` (0-based), in that order.
    pub fn select(&self, indices: &[usize]) -> Result<DiscriminantModel> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidArgument(format!(
                "direction {} requested, model has {}",
                bad + 1,
                self.len()
            )));
        }
        Ok(DiscriminantModel {
            method: self.method,
            directions: indices.iter().map(|&i| self.directions[i].clone()).collect(),
            ratios: indices.iter().map(|&i| self.ratios[i]).collect(),
            delta: self.delta,
            k_requested: indices.len(),
        })
    }

    /// Largest `|u_i . u_j|` over distinct pairs.
    pub fn max_overlap(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.directions.iter().enumerate() {
            for b in &self.directions[i + 1..] {
                worst = worst.max(a.dot(b).abs());
            }
        }
        worst
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDocument {
            method: self.method,
            delta: self.delta,
            k_requested: self.k_requested,
            n_features: self.n_features(),
            directions: self.directions.iter().map(|d| d.iter().copied().collect()).collect(),
            ratios: self.ratios.clone(),
        };
        crate::json::to_string(&doc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.directions.len() != doc.ratios.len() {
            return Err(Error::Shape(format!(
                "{} directions but {} ratios",
                doc.directions.len(),
                doc.ratios.len()
            )));
        }
        if let Some(bad) = doc.directions.iter().find(|d| d.len() != doc.n_features) {
            return Err(Error::ShapeMismatch {
                expected: doc.n_features,
                got: bad.len(),
            });
        }
        if doc.directions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite direction entry".into()));
        }
        Ok(Self {
            method: doc.method,
            directions: doc.directions.into_iter().map(DVector::from_vec).collect(),
            ratios: doc.ratios,
            delta: doc.delta,
            k_requested: doc.k_requested,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// `X W`, where `W` holds all of the model's directions as columns.
pub fn project(model: &DiscriminantModel, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    project_onto(model, x, model.len())
}

/// `X W_l` for the first `l` directions.
pub fn project_onto(model: &DiscriminantModel, x: &DMatrix<f64>, l: usize) -> Result<DMatrix<f64>> {
    if x.ncols() != model.n_features() {
        return Err(Error::ShapeMismatch {
            expected: model.n_features(),
            got: x.ncols(),
        });
    }
    Ok(x * model.basis(l)?)
}

/// Fits `method` with `k` directions. PCA ignores `delta`.
pub fn fit(method: Method, data: &LabeledDataset, k: usize, delta: f64) -> Result<DiscriminantModel> {
    if method == Method::PCA {
        return pca(data, k);
    }
    let stats = compute_stats(data, delta)?;
    fit_with_stats(method, data, &stats, k)
}

/// Like [`fit`] but reuses precomputed statistics of `data`.
pub fn fit_with_stats(
    method: Method,
    data: &LabeledDataset,
    stats: &ScatterStats,
    k: usize,
) -> Result<DiscriminantModel> {
    match method {
        Method::ClassicLDA => classic_lda_from_stats(stats, k),
        Method::GramSchmidtLDA => {
            let full = gram_schmidt_lda_from_stats(stats)?;
            if k > full.len() {
                return Err(Error::KTooLarge {
                    requested: k,
                    limit: full.len(),
                });
            }
            let mut model = full.select(&(0..k).collect::<Vec<_>>())?;
            model.k_requested = k;
            Ok(model)
        }
        Method::GOLDA => go_lda_from_stats(stats, k),
        Method::FoleySammon => foley_sammon_from_stats(stats, k),
        Method::PCA => pca(data, k),
    }
}

pub(crate) fn check_k(k: usize, limit: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("at least one direction must be requested".into()));
    }
    if k > limit {
        return Err(Error::KTooLarge { requested: k, limit });
    }
    Ok(())
}

/// Removes the components of `v` along the orthonormal `basis`.
pub(crate) fn project_out(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for b in basis {
        let c = b.dot(v);
        v.axpy(-c, b, 1.0);
    }
}

pub(crate) fn max_overlap_with(v: &DVector<f64>, basis: &[DVector<f64>]) -> f64 {
    basis.iter().fold(0.0f64, |m, b| m.max(b.dot(v).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::blobs;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            let json = serde_json::to_string(&m).unwrap();
            assert_eq!(json, format!("\"{}\"", m.name()));
        }
        assert!("lda".parse::<Method>().is_err());
    }

    #[test]
    fn project_directions_gives_identity() {
        let data = blobs(90, 5, 3, 2.0, 3);
        let model = go_lda(&data, 5, 5e-3).unwrap();
        let w = model.basis(5).unwrap();
        let p = project(&model, &w.transpose()).unwrap();
        assert!((p - DMatrix::identity(5, 5)).amax() < 1e-8);
    }

    #[test]
    fn project_zero_and_shape() {
        let data = blobs(60, 4, 3, 2.0, 1);
        let model = go_lda(&data, 3, 5e-3).unwrap();
        let z = project(&model, &DMatrix::zeros(7, 4)).unwrap();
        assert_eq!(z.shape(), (7, 3));
        assert!(z.iter().all(|&v| v == 0.0));
        assert!(matches!(
            project(&model, &DMatrix::zeros(7, 5)),
            Err(Error::ShapeMismatch { expected: 4, got: 5 })
        ));
    }

    #[test]
    fn json_round_trip_reproduces_projection_bits() {
        let data = blobs(120, 7, 4, 1.5, 11);
        let model = go_lda(&data, 6, 5e-3).unwrap();
        let back = DiscriminantModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);
        let a = project(&model, &data.features).unwrap();
        let b = project(&back, &data.features).unwrap();
        assert!(a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn save_and_load_file() {
        let data = blobs(60, 3, 3, 2.0, 5);
        let model = classic_lda(&data, 2, 5e-3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        model.save(&path).unwrap();
        assert_eq!(DiscriminantModel::load(&path).unwrap(), model);
    }

    #[test]
    fn malformed_document_rejected() {
        let text = r#"{"method":"go-lda","delta":0.005,"k_requested":1,"n_features":2,
            "directions":[[1.0]],"ratios":[1.0]}"#;
        assert!(matches!(
            DiscriminantModel::from_json(text),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn select_and_basis_bounds() {
        let data = blobs(60, 4, 3, 2.0, 8);
        let model = go_lda(&data, 4, 5e-3).unwrap();
        let sub = model.select(&[3, 4 - 1]).unwrap();
        assert_eq!(sub.directions[0], model.directions[3]);
        assert!(model.select(&[4]).is_err());
        assert!(model.basis(0).is_err());
    }

    #[test]
    fn gs_lda_through_fit_respects_limit() {
        let data = blobs(60, 5, 3, 2.0, 2);
        assert_eq!(fit(Method::GramSchmidtLDA, &data, 2, 5e-3).unwrap().len(), 2);
        assert!(matches!(
            fit(Method::GramSchmidtLDA, &data, 3, 5e-3),
            Err(Error::KTooLarge { requested: 3, limit: 2 })
        ));
    }
}
