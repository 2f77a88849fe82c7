//! Cross-validated accuracy tables, Fisher-ratio curves and timing sweeps.

mod cv;
mod protocols;
mod report;
mod timing;

use serde::{Deserialize, Serialize};

use crate::classify::ClassifierKind;
use crate::discriminant::Method;
use crate::scatter::DEFAULT_DELTA;

pub use cv::{stratified_kfold, Fold};
pub use protocols::{fisher_curve, per_direction_accuracy, subspace_accuracy};
pub use timing::{timing_benchmark, TimingConfig};

pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_SEED: u64 = 42;
/// Default number of directions for benchmark runs, capped by `M`.
pub const DEFAULT_MAX_K: usize = 15;

/// Settings shared by the cross-validated protocols.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub folds: usize,
    pub seed: u64,
    pub delta: f64,
    pub k_neighbors: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            folds: DEFAULT_FOLDS,
            seed: DEFAULT_SEED,
            delta: DEFAULT_DELTA,
            k_neighbors: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sweep {
    /// Fixed `N`, varying `M`.
    #[serde(rename = "features")]
    FeatureSweep,
    /// Fixed `M`, varying `N`.
    #[serde(rename = "samples")]
    SampleSweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Population standard deviation over folds.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceEntry {
    pub l: usize,
    /// `None` where the method has fewer than `l` directions.
    pub accuracy: Option<MeanStd>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    /// `M` for a feature sweep, `N` for a sample sweep.
    pub size: usize,
    pub n_samples: usize,
    pub n_features: usize,
    /// Median wall time in seconds, `None` when skipped.
    pub classic_seconds: Option<f64>,
    pub golda_seconds: Option<f64>,
}

impl TimingRow {
    /// GO-LDA time over classic-LDA time.
    pub fn ratio(&self) -> Option<f64> {
        Some(self.golda_seconds? / self.classic_seconds?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub sweep: Sweep,
    pub n_classes: usize,
    pub k: usize,
    pub repeats: usize,
    pub rows: Vec<TimingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    /// For timing reports this is GO-LDA, timed against classic-LDA.
    pub method: Method,
    pub classifier: Option<ClassifierKind>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    /// Mean fold accuracy using each direction alone; `None` is N/A.
    pub per_direction_acc: Vec<Option<f64>>,
    pub subspace_acc: Vec<SubspaceEntry>,
    pub fisher_curve: Vec<f64>,
    pub timing: Option<TimingTable>,
}

impl EvalReport {
    pub(crate) fn empty(dataset: &str, method: Method) -> Self {
        Self {
            dataset: dataset.to_string(),
            method,
            classifier: None,
            folds: None,
            seed: None,
            per_direction_acc: Vec::new(),
            subspace_acc: Vec::new(),
            fisher_curve: Vec::new(),
            timing: None,
        }
    }
}
