//! Dataset ingestion: CSV parsing, label encoding, standardization and the
//! named dataset registry used by the benchmark harness.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Environment variable naming the directory that holds `registry.txt`.
pub const DATA_DIR_ENV: &str = "GODISC_DATA_DIR";

/// File name of the registry inside the data directory.
pub const REGISTRY_FILE: &str = "registry.txt";

/// An `N x M` feature matrix with dense class labels `0..C`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub features: DMatrix<f64>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl LabeledDataset {
    /// Builds a dataset, checking that every label is in range, every class
    /// occurs, all features are finite and `N >= C >= 2`.
    pub fn new(features: DMatrix<f64>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        let (n, m) = features.shape();
        if labels.len() != n {
            return Err(Error::Shape(format!(
                "{} labels for {} feature rows",
                labels.len(),
                n
            )));
        }
        if m == 0 {
            return Err(Error::InvalidDataset("no feature columns".into()));
        }
        let c = class_names.len();
        if c < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 classes, found {c}")));
        }
        if n < c {
            return Err(Error::InvalidDataset(format!("{n} samples for {c} classes")));
        }
        let mut counts = vec![0usize; c];
        for (row, &label) in labels.iter().enumerate() {
            if label >= c {
                return Err(Error::InvalidDataset(format!(
                    "row {row}: label {label} outside 0..{c}"
                )));
            }
            counts[label] += 1;
        }
        if let Some(empty) = counts.iter().position(|&k| k == 0) {
            return Err(Error::EmptyClass(class_names[empty].clone()));
        }
        if let Some(idx) = features.iter().position(|v| !v.is_finite()) {
            // column-major storage
            return Err(Error::Parse {
                row: idx % n,
                column: idx / n,
                message: "non-finite feature value".into(),
            });
        }
        Ok(Self {
            features,
            labels,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Original label string of every row.
    pub fn decoded_labels(&self) -> Vec<&str> {
        self.labels
            .iter()
            .map(|&l| self.class_names[l].as_str())
            .collect()
    }

    /// Rows `indices` as a new dataset. Classes absent from the selection are
    /// dropped and the remaining ones re-encoded in their original order; the
    /// returned vector maps new class indices back to the original ones.
    pub fn subset(&self, indices: &[usize]) -> Result<(LabeledDataset, Vec<usize>)> {
        let m = self.n_features();
        let features = DMatrix::from_fn(indices.len(), m, |r, c| self.features[(indices[r], c)]);
        let mut present = vec![false; self.n_classes()];
        for &i in indices {
            present[self.labels[i]] = true;
        }
        let class_map: Vec<usize> = (0..self.n_classes()).filter(|&c| present[c]).collect();
        let mut remap = vec![usize::MAX; self.n_classes()];
        for (new, &old) in class_map.iter().enumerate() {
            remap[old] = new;
        }
        let labels = indices.iter().map(|&i| remap[self.labels[i]]).collect();
        let class_names = class_map.iter().map(|&c| self.class_names[c].clone()).collect();
        Ok((LabeledDataset::new(features, labels, class_names)?, class_map))
    }

    /// Column-standardized copy: mean 0 and population standard deviation 1.
    /// Zero-variance columns are centred only.
    pub fn standardized(&self) -> LabeledDataset {
        let mut out = self.clone();
        standardize_columns(&mut out.features);
        out
    }
}

/// Centres every column and scales it to unit population standard deviation.
pub fn standardize_columns(x: &mut DMatrix<f64>) {
    let n = x.nrows() as f64;
    for mut col in x.column_iter_mut() {
        let mean = col.iter().sum::<f64>() / n;
        col.iter_mut().for_each(|v| *v -= mean);
        let var = col.iter().map(|v| v * v).sum::<f64>() / n;
        let std = var.sqrt();
        if std > 16.0 * f64::EPSILON * (mean.abs() + 1.0) {
            col.iter_mut().for_each(|v| *v /= std);
        }
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Zero-based column index.
    Index(usize),
    /// The last column of every row.
    Last,
    /// Header name; requires a header row.
    Name(String),
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Last => f.write_str("last"),
            LabelColumn::Name(n) => f.write_str(n),
        }
    }
}

impl FromStr for LabelColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty label column".into()));
        }
        if s.eq_ignore_ascii_case("last") {
            return Ok(LabelColumn::Last);
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub label_column: LabelColumn,
    pub standardize: bool,
    pub delimiter: u8,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>, label_column: LabelColumn) -> Self {
        Self {
            path: path.into(),
            label_column,
            standardize: false,
            delimiter: b',',
        }
    }
}

/// Loads a CSV file into a [`LabeledDataset`].
///
/// A header row is detected when the label column is given by name, or when
/// some non-label cell of the first row does not parse as a number. Labels are
/// encoded `0..C` in order of first appearance.
pub fn load_csv(spec: &DatasetSpec) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(spec.delimiter)
        .trim(csv::Trim::All)
        .from_path(&spec.path)
        .map_err(|e| csv_error(&spec.path, e))?;

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(&spec.path, e))?;
        // blank lines
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        records.push(rec);
    }
    if records.is_empty() {
        return Err(Error::InvalidDataset(format!("{}: no rows", spec.path.display())));
    }

    let width = records[0].len();
    let (label_idx, has_header) = match &spec.label_column {
        LabelColumn::Name(name) => {
            let hits: Vec<usize> = records[0]
                .iter()
                .enumerate()
                .filter(|(_, h)| *h == name)
                .map(|(i, _)| i)
                .collect();
            match hits.as_slice() {
                [i] => (*i, true),
                [] => {
                    return Err(Error::InvalidArgument(format!(
                        "label column {name:?} not found in header of {}",
                        spec.path.display()
                    )))
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "label column {name:?} is ambiguous in {}",
                        spec.path.display()
                    )))
                }
            }
        }
        other => {
            let idx = match other {
                LabelColumn::Index(i) => *i,
                _ => width.saturating_sub(1),
            };
            if idx >= width {
                return Err(Error::InvalidArgument(format!(
                    "label column {idx} out of range for {width} columns"
                )));
            }
            let header = records[0]
                .iter()
                .enumerate()
                .any(|(i, cell)| i != idx && cell.parse::<f64>().is_err());
            (idx, header)
        }
    };
    if width < 2 {
        return Err(Error::InvalidDataset("need a label column and at least one feature".into()));
    }

    let body = if has_header { &records[1..] } else { &records[..] };
    let first_line = if has_header { 2 } else { 1 };
    let n = body.len();
    let m = width - 1;
    let mut values = Vec::with_capacity(n * m);
    let mut labels = Vec::with_capacity(n);
    let mut class_names: Vec<String> = Vec::new();
    let mut codes: HashMap<String, usize> = HashMap::new();

    for (r, rec) in body.iter().enumerate() {
        let line = first_line + r;
        if rec.len() != width {
            return Err(Error::Shape(format!(
                "row {line} has {} columns, expected {width}",
                rec.len()
            )));
        }
        for (c, cell) in rec.iter().enumerate() {
            if c == label_idx {
                if cell.is_empty() {
                    return Err(Error::Parse {
                        row: line,
                        column: c + 1,
                        message: "missing label".into(),
                    });
                }
                let code = *codes.entry(cell.to_string()).or_insert_with(|| {
                    class_names.push(cell.to_string());
                    class_names.len() - 1
                });
                labels.push(code);
                continue;
            }
            if cell.is_empty() {
                return Err(Error::Parse {
                    row: line,
                    column: c + 1,
                    message: "missing value".into(),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line,
                column: c + 1,
                message: format!("{cell:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row: line,
                    column: c + 1,
                    message: format!("{cell:?} is not finite"),
                });
            }
            values.push(v);
        }
    }

    let features = DMatrix::from_row_slice(n, m, &values);
    let data = LabeledDataset::new(features, labels, class_names)?;
    Ok(if spec.standardize {
        data.standardized()
    } else {
        data
    })
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let position = err.position().map(|p| p.line() as usize).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse {
            row: position,
            column: 0,
            message: format!("{other:?}"),
        },
    }
}

/// Named datasets read from a plain-text registry.
///
/// Each non-comment line holds whitespace-separated fields
/// `name path label_column standardize [delimiter]`; relative paths are taken
/// relative to the registry file's directory.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: Vec<(String, DatasetSpec)>,
}

impl Registry {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, root, path)
    }

    /// Registry in `dir/registry.txt`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        Self::load(dir.as_ref().join(REGISTRY_FILE))
    }

    /// Registry under `$GODISC_DATA_DIR`, falling back to `./data`.
    pub fn from_env() -> Result<Self> {
        let dir = std::env::var_os(DATA_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("data"));
        Self::from_dir(dir)
    }

    pub fn parse(text: &str, root: &Path, source: &Path) -> Result<Self> {
        let mut entries: Vec<(String, DatasetSpec)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Registry {
                path: source.to_path_buf(),
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !(4..=5).contains(&fields.len()) {
                return Err(bad(format!("expected 4 or 5 fields, found {}", fields.len())));
            }
            let name = fields[0].to_string();
            if entries.iter().any(|(n, _)| *n == name) {
                return Err(bad(format!("duplicate dataset {name:?}")));
            }
            let file = Path::new(fields[1]);
            let path = if file.is_absolute() {
                file.to_path_buf()
            } else {
                root.join(file)
            };
            let label_column = fields[2].parse().map_err(|e: Error| bad(e.to_string()))?;
            let standardize = match fields[3] {
                "true" | "yes" | "1" => true,
                "false" | "no" | "0" => false,
                other => return Err(bad(format!("bad standardize flag {other:?}"))),
            };
            let delimiter = match fields.get(4).copied() {
                None => b',',
                Some("tab") | Some("\\t") => b'\t',
                Some("space") => b' ',
                Some(d) if d.len() == 1 => d.as_bytes()[0],
                Some(d) => return Err(bad(format!("bad delimiter {d:?}"))),
            };
            entries.push((
                name,
                DatasetSpec {
                    path,
                    label_column,
                    standardize,
                    delimiter,
                },
            ));
        }
        Ok(Self { entries })
    }

    pub fn lookup(&self, name: &str) -> Result<&DatasetSpec> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownDataset(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &DatasetSpec)> {
        self.entries.iter().map(|(n, s)| (n.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Looks `name` up in `registry`.
pub fn registry_lookup(registry: &Registry, name: &str) -> Result<DatasetSpec> {
    registry.lookup(name).cloned()
}
