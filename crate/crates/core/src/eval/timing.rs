use std::time::{Duration, Instant};

use super::{EvalReport, Sweep, TimingRow, TimingTable};
use crate::discriminant::{classic_lda_from_stats, go_lda_from_stats, Method};
use crate::scatter::{compute_stats, DEFAULT_DELTA};
use crate::synth::blobs;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct TimingConfig {
    pub n_classes: usize,
    /// Directions fitted by GO-LDA; classic-LDA fits `min(k, C - 1)`.
    pub k: usize,
    pub seed: u64,
    pub repeats: usize,
    /// `N` for a feature sweep.
    pub fixed_samples: usize,
    /// `M` for a sample sweep.
    pub fixed_features: usize,
    /// Sizes whose estimated working set exceeds this are skipped.
    pub memory_budget_bytes: usize,
    pub delta: f64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            n_classes: 5,
            k: 4,
            seed: 42,
            repeats: 3,
            fixed_samples: 1000,
            fixed_features: 10,
            memory_budget_bytes: 4 << 30,
            delta: DEFAULT_DELTA,
        }
    }
}

fn working_set_bytes(n: usize, m: usize) -> usize {
    // data and its centred copy, plus a dozen M x M matrices
    8 * (2 * n * m + 12 * m * m)
}

fn median(mut xs: Vec<Duration>) -> f64 {
    xs.sort();
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid].as_secs_f64()
    } else {
        0.5 * (xs[mid - 1].as_secs_f64() + xs[mid].as_secs_f64())
    }
}

/// Wall time of a full fit (scatter statistics included) of classic-LDA and of
/// GO-LDA on isotropic blobs, for each size of the sweep. Runs of the two
/// methods are interleaved and the median of `repeats` is reported.
pub fn timing_benchmark(sweep: Sweep, sizes: &[usize], cfg: &TimingConfig) -> Result<EvalReport> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no sweep sizes given".into()));
    }
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("sweep sizes must be ascending".into()));
    }
    if cfg.repeats == 0 || cfg.n_classes < 2 || cfg.k == 0 {
        return Err(Error::InvalidArgument("timing needs repeats >= 1, C >= 2 and k >= 1".into()));
    }
    let classic_k = cfg.k.min(cfg.n_classes - 1);
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let (n, m) = match sweep {
            Sweep::FeatureSweep => (cfg.fixed_samples, size),
            Sweep::SampleSweep => (size, cfg.fixed_features),
        };
        let mut row = TimingRow {
            size,
            n_samples: n,
            n_features: m,
            classic_seconds: None,
            golda_seconds: None,
        };
        if working_set_bytes(n, m) > cfg.memory_budget_bytes {
            log::warn!("skipping N={n}, M={m}: above the memory budget");
            rows.push(row);
            continue;
        }
        if n < cfg.n_classes || cfg.k > m {
            return Err(Error::InvalidArgument(format!(
                "sweep point N={n}, M={m} too small for C={} and k={}",
                cfg.n_classes, cfg.k
            )));
        }
        let data = blobs(n, m, cfg.n_classes, 1.0, cfg.seed);
        let mut classic = Vec::with_capacity(cfg.repeats);
        let mut golda = Vec::with_capacity(cfg.repeats);
        for _ in 0..cfg.repeats {
            let start = Instant::now();
            let stats = compute_stats(&data, cfg.delta)?;
            std::hint::black_box(classic_lda_from_stats(&stats, classic_k)?);
            classic.push(start.elapsed());

            let start = Instant::now();
            let stats = compute_stats(&data, cfg.delta)?;
            std::hint::black_box(go_lda_from_stats(&stats, cfg.k)?);
            golda.push(start.elapsed());
        }
        row.classic_seconds = Some(median(classic));
        row.golda_seconds = Some(median(golda));
        log::info!("N={n} M={m}: classic {:?}s, go-lda {:?}s", row.classic_seconds, row.golda_seconds);
        rows.push(row);
    }
    Ok(EvalReport {
        seed: Some(cfg.seed),
        timing: Some(TimingTable {
            sweep,
            n_classes: cfg.n_classes,
            k: cfg.k,
            repeats: cfg.repeats,
            rows,
        }),
        ..EvalReport::empty("synthetic-blobs", Method::GOLDA)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_sweep_gives_one_row() {
        let cfg = TimingConfig { repeats: 1, ..Default::default() };
        let r = timing_benchmark(Sweep::FeatureSweep, &[20], &cfg).unwrap();
        let t = r.timing.unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!((t.rows[0].n_samples, t.rows[0].n_features), (1000, 20));
        assert!(t.rows[0].ratio().unwrap() > 0.0);
    }

    #[test]
    fn over_budget_sizes_are_skipped() {
        let cfg = TimingConfig {
            repeats: 1,
            memory_budget_bytes: 1 << 20,
            ..Default::default()
        };
        let r = timing_benchmark(Sweep::SampleSweep, &[100, 100_000], &cfg).unwrap();
        let rows = r.timing.unwrap().rows;
        assert!(rows[0].classic_seconds.is_some());
        assert!(rows[1].classic_seconds.is_none() && rows[1].ratio().is_none());
    }

    #[test]
    fn unsorted_sizes_rejected() {
        assert!(timing_benchmark(Sweep::SampleSweep, &[200, 100], &TimingConfig::default()).is_err());
    }
}
