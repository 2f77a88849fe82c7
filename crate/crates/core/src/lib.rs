//! Discriminant subspaces beyond the `C - 1` limit.
//!
//! `godisc-core` fits sequences of mutually orthogonal directions that each
//! maximise the Fisher ratio subject to orthogonality with the directions found
//! before them (GO-LDA), next to the classic generalized-eigenvector LDA, its
//! Gram–Schmidt orthogonalization, the Foley–Sammon binary recursion and PCA.
//! Projected data can be classified with 1-NN or Gaussian linear/quadratic
//! classifiers, and the [`eval`] module runs stratified cross-validation,
//! Fisher-ratio curves and timing sweeps over these methods.
//!
//! ```
//! use godisc_core::{dataio::LabeledDataset, discriminant, scatter::DEFAULT_DELTA};
//! use nalgebra::DMatrix;
//!
//! let x = DMatrix::from_row_slice(6, 2, &[
//!     0.0, 0.1, 0.2, -0.1, -0.1, 0.0,
//!     3.0, 1.0, 3.1, 0.9, 2.9, 1.2,
//! ]);
//! let data = LabeledDataset::new(x, vec![0, 0, 0, 1, 1, 1], vec!["a".into(), "b".into()]).unwrap();
//! let model = discriminant::go_lda(&data, 2, DEFAULT_DELTA).unwrap();
//! assert_eq!(model.directions.len(), 2);
//! assert!(model.directions[0].dot(&model.directions[1]).abs() < 1e-10);
//! ```

pub mod classify;
pub mod dataio;
pub mod discriminant;
pub mod eigen;
mod error;
pub mod eval;
pub mod json;
pub mod scatter;
pub mod synth;

pub use classify::{ClassifierKind, ClassifierModel};
pub use dataio::{DatasetSpec, LabelColumn, LabeledDataset, Registry};
pub use discriminant::{DiscriminantModel, Method};
pub use eigen::EigenPair;
pub use error::{Error, Result};
pub use eval::{EvalReport, Sweep};
pub use scatter::ScatterStats;
