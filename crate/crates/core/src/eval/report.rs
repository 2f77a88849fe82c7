use std::fmt::Write as _;

use super::{EvalReport, Sweep};
use crate::Result;

fn acc(v: Option<f64>) -> String {
    v.map_or_else(|| "N/A".to_string(), |a| format!("{a:.2}"))
}

fn seconds(v: Option<f64>) -> String {
    v.map_or_else(|| "skipped".to_string(), |s| format!("{s:.6}"))
}

impl EvalReport {
    /// JSON document with 17-significant-digit floats.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    /// Aligned text tables, one per populated section.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "dataset: {}  method: {}", self.dataset, self.method);
        if let Some(c) = self.classifier {
            let _ = write!(out, "  classifier: {c}");
        }
        if let Some(f) = self.folds {
            let _ = write!(out, "  folds: {f}");
        }
        if let Some(s) = self.seed {
            let _ = write!(out, "  seed: {s}");
        }
        out.push('\n');

        if !self.per_direction_acc.is_empty() {
            out.push_str("\naccuracy on individual directions\n");
            let cells: Vec<String> = self.per_direction_acc.iter().map(|&a| acc(a)).collect();
            let width = cells.iter().map(String::len).max().unwrap_or(0).max(3);
            let _ = write!(out, "{:<10}", "direction");
            for n in 1..=cells.len() {
                let _ = write!(out, " {n:>width$}");
            }
            let _ = write!(out, "\n{:<10}", "accuracy");
            for c in &cells {
                let _ = write!(out, " {c:>width$}");
            }
            out.push('\n');
        }

        if !self.subspace_acc.is_empty() {
            out.push_str("\naccuracy on subspaces of the first l directions\n");
            let _ = writeln!(out, "{:>5}  {:>12}", "l", "mean ± std");
            for e in &self.subspace_acc {
                let cell = e
                    .accuracy
                    .map_or_else(|| "N/A".to_string(), |a| format!("{:.2} ± {:.2}", a.mean, a.std));
                let _ = writeln!(out, "{:>5}  {:>12}", e.l, cell);
            }
        }

        if !self.fisher_curve.is_empty() {
            out.push_str("\nFisher ratio per direction\n");
            let _ = writeln!(out, "{:>5}  {:>14}", "n", "ratio");
            for (i, r) in self.fisher_curve.iter().enumerate() {
                let _ = writeln!(out, "{:>5}  {:>14.6e}", i + 1, r);
            }
        }

        if let Some(t) = &self.timing {
            let label = match t.sweep {
                Sweep::FeatureSweep => "M",
                Sweep::SampleSweep => "N",
            };
            let _ = writeln!(
                out,
                "\nwall time, median of {} (C = {}, k = {})",
                t.repeats, t.n_classes, t.k
            );
            let _ = writeln!(
                out,
                "{:>10} {:>10} {:>6} {:>12} {:>12} {:>7}",
                label, "N", "M", "classic_s", "go-lda_s", "ratio"
            );
            for r in &t.rows {
                let ratio = r.ratio().map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
                let _ = writeln!(
                    out,
                    "{:>10} {:>10} {:>6} {:>12} {:>12} {:>7}",
                    r.size,
                    r.n_samples,
                    r.n_features,
                    seconds(r.classic_seconds),
                    seconds(r.golda_seconds),
                    ratio
                );
            }
        }
        out
    }

    /// Long-format CSV: `section,index,value,std`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| crate::Error::InvalidArgument(format!("CSV output: {e}"));
        w.write_record(["section", "index", "value", "std"]).map_err(csv_err)?;
        let na = "N/A".to_string();
        for (i, a) in self.per_direction_acc.iter().enumerate() {
            let v = a.map_or_else(|| na.clone(), |x| x.to_string());
            w.write_record(["per_direction", &(i + 1).to_string(), &v, ""]).map_err(csv_err)?;
        }
        for e in &self.subspace_acc {
            let (v, s) = e
                .accuracy
                .map_or_else(|| (na.clone(), na.clone()), |a| (a.mean.to_string(), a.std.to_string()));
            w.write_record(["subspace", &e.l.to_string(), &v, &s]).map_err(csv_err)?;
        }
        for (i, r) in self.fisher_curve.iter().enumerate() {
            w.write_record(["fisher", &(i + 1).to_string(), &r.to_string(), ""]).map_err(csv_err)?;
        }
        if let Some(t) = &self.timing {
            for r in &t.rows {
                let s = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
                w.write_record(["timing_classic", &r.size.to_string(), &s(r.classic_seconds), ""]).map_err(csv_err)?;
                w.write_record(["timing_golda", &r.size.to_string(), &s(r.golda_seconds), ""]).map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::InvalidArgument(format!("CSV output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{MeanStd, SubspaceEntry};
    use super::*;
    use crate::discriminant::Method;

    fn sample() -> EvalReport {
        EvalReport {
            per_direction_acc: vec![Some(0.9), None],
            subspace_acc: vec![SubspaceEntry {
                l: 2,
                accuracy: Some(MeanStd { mean: 0.98, std: 0.03 }),
            }],
            fisher_curve: vec![4.0, 0.5],
            ..EvalReport::empty("wine", Method::GOLDA)
        }
    }

    #[test]
    fn table_marks_missing_entries() {
        let t = sample().to_table();
        assert!(t.contains("N/A"));
        assert!(t.contains("0.98 ± 0.03"));
        assert!(t.contains("0.90"));
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: EvalReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_rows() {
        let c = sample().to_csv().unwrap();
        assert!(c.starts_with("section,index,value,std\n"));
        assert!(c.contains("per_direction,2,N/A,\n"));
        assert!(c.contains("subspace,2,0.98,0.03\n"));
    }
}
