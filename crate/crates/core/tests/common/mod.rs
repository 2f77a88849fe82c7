#![allow(dead_code)]

use std::path::PathBuf;

use godisc_core::dataio::{load_csv, registry_lookup};
use godisc_core::{LabeledDataset, Registry};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn registry() -> Registry {
    Registry::from_dir(data_dir()).expect("repository registry")
}

pub fn load(name: &str) -> LabeledDataset {
    load_csv(&registry_lookup(&registry(), name).unwrap()).unwrap()
}

/// Uniform random unit vector orthogonal to the orthonormal `basis`.
pub fn random_feasible(rng: &mut impl Rng, m: usize, basis: &[DVector<f64>]) -> DVector<f64> {
    loop {
        let mut g = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        for b in basis {
            let c = b.dot(&g);
            g.axpy(-c, b, 1.0);
        }
        let n = g.norm();
        if n > 1e-8 {
            return g / n;
        }
    }
}
