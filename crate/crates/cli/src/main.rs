mod args;
mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use godisc_core::dataio::{load_csv, registry_lookup};
use godisc_core::discriminant::{self, project_onto, DiscriminantModel};
use godisc_core::eval::{self, EvalOptions, TimingConfig, DEFAULT_MAX_K};
use godisc_core::scatter::compute_stats;
use godisc_core::{DatasetSpec, LabeledDataset, Method, Registry, Sweep};
use serde::Serialize;

use args::{Cli, Command, CvArgs, DatasetArgs, Format, OutputArgs, SweepArg};

enum Failure {
    Usage(String),
    Compute(godisc_core::Error),
}

impl From<godisc_core::Error> for Failure {
    fn from(e: godisc_core::Error) -> Self {
        Failure::Compute(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(message: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(message.into()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let dir = cli.data_dir.as_deref();
    match cli.command {
        Command::Fit(a) => {
            pick_format(&a.output, Format::Json, &[Format::Json])?;
            let (_, data) = load_dataset(&a.data, dir)?;
            let k = default_k(a.k, a.method, &data);
            let model = discriminant::fit(a.method, &data, k, a.delta)?;
            emit(&a.output, &model.to_json()?)
        }
        Command::Project(a) => {
            let format = pick_format(&a.output, Format::Csv, &[Format::Csv, Format::Json])?;
            let (_, data) = load_dataset(&a.data, dir)?;
            let model = match (&a.model, a.method) {
                (Some(path), _) => DiscriminantModel::load(path)?,
                (None, Some(method)) => {
                    let k = default_k(a.k, method, &data);
                    discriminant::fit(method, &data, k, a.delta)?
                }
                (None, None) => return usage("project needs --model or --method"),
            };
            let model = select_dims(&model, &a.dims)?;
            let z = project_onto(&model, &data.features, model.len())?;
            let text = match format {
                Format::Json => projection_json(&z, &data)?,
                _ => projection_csv(&z, &data),
            };
            emit(&a.output, &text)
        }
        Command::FisherCurve(a) => {
            let format = pick_format(&a.output, Format::Table, &[Format::Json, Format::Table, Format::Csv])?;
            let (name, data) = load_dataset(&a.data, dir)?;
            let k = default_k(a.k, a.method, &data);
            let report = eval::fisher_curve(&data, &name, a.method, k, a.delta)?;
            emit_report(&a.output, format, &report)
        }
        Command::PerDirection(a) => {
            let format = pick_format(&a.output, Format::Table, &[Format::Json, Format::Table, Format::Csv])?;
            let (name, data) = load_dataset(&a.data, dir)?;
            let k = a.k.unwrap_or_else(|| data.n_features().min(DEFAULT_MAX_K));
            let report = eval::per_direction_accuracy(&data, &name, a.method, a.classifier, k, &eval_options(&a.cv))?;
            emit_report(&a.output, format, &report)
        }
        Command::Subspace(a) => {
            let format = pick_format(&a.output, Format::Table, &[Format::Json, Format::Table, Format::Csv])?;
            let (name, data) = load_dataset(&a.data, dir)?;
            if a.l_values.contains(&0) {
                return usage("--l values are subspace dimensions and start at 1");
            }
            let report = eval::subspace_accuracy(&data, &name, a.method, a.classifier, &a.l_values, &eval_options(&a.cv))?;
            emit_report(&a.output, format, &report)
        }
        Command::Timing(a) => {
            let format = pick_format(&a.output, Format::Table, &[Format::Json, Format::Table, Format::Csv])?;
            let sweep = match a.sweep {
                SweepArg::Features => Sweep::FeatureSweep,
                SweepArg::Samples => Sweep::SampleSweep,
            };
            let cfg = TimingConfig {
                n_classes: a.classes,
                k: a.k,
                seed: a.seed,
                repeats: a.repeats,
                delta: a.delta,
                ..TimingConfig::default()
            };
            let report = eval::timing_benchmark(sweep, &a.sizes, &cfg)?;
            emit_report(&a.output, format, &report)
        }
        Command::Scatter(a) => {
            pick_format(&a.output, Format::Svg, &[Format::Svg])?;
            if a.dims.len() != 2 {
                return usage("--dims takes exactly two direction indices, e.g. 4,5");
            }
            let (name, data) = load_dataset(&a.data, dir)?;
            let k = *a.dims.iter().max().expect("two dims");
            if k == 0 {
                return usage("direction indices start at 1");
            }
            let model = discriminant::fit(a.method, &data, k, a.delta)?;
            let model = select_dims(&model, &a.dims)?;
            let z = project_onto(&model, &data.features, 2)?;
            let title = format!("{name}: {} directions {} and {}", a.method, a.dims[0], a.dims[1]);
            let axes = [format!("direction {}", a.dims[0]), format!("direction {}", a.dims[1])];
            let text = svg::scatter(&z, &data.labels, &data.class_names, [&axes[0], &axes[1]], &title);
            emit(&a.output, &text)
        }
        Command::Datasets(out) => {
            let format = pick_format(&out, Format::Table, &[Format::Json, Format::Table])?;
            let registry = open_registry(dir)?;
            let text = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry<'a> {
                        name: &'a str,
                        path: String,
                        label_column: String,
                        standardize: bool,
                    }
                    let entries: Vec<Entry> = registry
                        .iter()
                        .map(|(name, spec)| Entry {
                            name,
                            path: spec.path.display().to_string(),
                            label_column: spec.label_column.to_string(),
                            standardize: spec.standardize,
                        })
                        .collect();
                    godisc_core::json::to_string(&entries)?
                }
                _ => {
                    let mut s = String::new();
                    for (name, spec) in registry.iter() {
                        s.push_str(&format!(
                            "{name:<12} {:<10} {:<5} {}\n",
                            spec.label_column.to_string(),
                            spec.standardize,
                            spec.path.display()
                        ));
                    }
                    s
                }
            };
            emit(&out, &text)
        }
        Command::Stats(a) => {
            let format = pick_format(&a.output, Format::Json, &[Format::Json, Format::Table])?;
            let (name, data) = load_dataset(&a.data, dir)?;
            let stats = compute_stats(&data, a.delta)?;
            let rows = |m: &nalgebra::DMatrix<f64>| -> Vec<Vec<f64>> { m.row_iter().map(|r| r.iter().copied().collect()).collect() };
            #[derive(Serialize)]
            struct StatsDoc<'a> {
                dataset: &'a str,
                n_samples: usize,
                n_features: usize,
                class_names: &'a [String],
                class_counts: &'a [usize],
                delta: f64,
                overall_mean: Vec<f64>,
                class_means: Vec<Vec<f64>>,
                between_scatter: Vec<Vec<f64>>,
                within_scatter: Vec<Vec<f64>>,
            }
            let text = match format {
                Format::Json => godisc_core::json::to_string(&StatsDoc {
                    dataset: &name,
                    n_samples: data.n_samples(),
                    n_features: data.n_features(),
                    class_names: &data.class_names,
                    class_counts: &stats.class_counts,
                    delta: stats.delta,
                    overall_mean: stats.overall_mean.iter().copied().collect(),
                    class_means: rows(&stats.class_means),
                    between_scatter: rows(&stats.sb),
                    within_scatter: rows(&stats.sw),
                })?,
                _ => {
                    let mut s = format!(
                        "dataset: {name}\nsamples: {}\nfeatures: {}\nclasses: {}\n",
                        data.n_samples(),
                        data.n_features(),
                        data.n_classes()
                    );
                    for (c, k) in data.class_names.iter().zip(&stats.class_counts) {
                        s.push_str(&format!("  {c:<16} {k}\n"));
                    }
                    s.push_str(&format!(
                        "trace S_B: {:.6e}\ntrace S_W: {:.6e}\n",
                        stats.sb.trace(),
                        stats.sw.trace()
                    ));
                    s
                }
            };
            emit(&a.output, &text)
        }
    }
}

fn pick_format(out: &OutputArgs, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = out.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return usage(format!("--format {f:?} is not available for this command").to_lowercase());
    }
    Ok(f)
}

fn default_k(k: Option<usize>, method: Method, data: &LabeledDataset) -> usize {
    k.unwrap_or_else(|| {
        method
            .max_directions(data.n_features(), data.n_classes())
            .min(DEFAULT_MAX_K)
    })
}

fn eval_options(cv: &CvArgs) -> EvalOptions {
    EvalOptions {
        folds: cv.folds,
        seed: cv.seed,
        delta: cv.delta,
        k_neighbors: cv.neighbors,
    }
}

fn select_dims(model: &DiscriminantModel, dims: &[usize]) -> CliResult<DiscriminantModel> {
    if dims.is_empty() {
        return Ok(model.clone());
    }
    if dims.contains(&0) {
        return usage("direction indices start at 1");
    }
    let zero_based: Vec<usize> = dims.iter().map(|d| d - 1).collect();
    Ok(model.select(&zero_based)?)
}

fn open_registry(dir: Option<&Path>) -> godisc_core::Result<Registry> {
    match dir {
        Some(d) => Registry::from_dir(d),
        None => Registry::from_env(),
    }
}

/// Resolves `--dataset` as a registry name first, then as a CSV path.
fn load_dataset(a: &DatasetArgs, dir: Option<&Path>) -> CliResult<(String, LabeledDataset)> {
    let path = PathBuf::from(&a.dataset);
    let registry = open_registry(dir);
    let mut spec = match registry {
        Ok(reg) => match registry_lookup(&reg, &a.dataset) {
            Ok(spec) => spec,
            Err(e) if !path.is_file() => return Err(e.into()),
            Err(_) => DatasetSpec::new(&path, a.label.parse()?),
        },
        Err(e) if !path.is_file() => return Err(e.into()),
        Err(_) => DatasetSpec::new(&path, a.label.parse()?),
    };
    if let Some(flag) = a.standardize {
        spec.standardize = flag;
    }
    let name = if path.is_file() {
        path.file_stem().map_or(a.dataset.clone(), |s| s.to_string_lossy().into_owned())
    } else {
        a.dataset.clone()
    };
    Ok((name, load_csv(&spec)?))
}

fn projection_csv(z: &nalgebra::DMatrix<f64>, data: &LabeledDataset) -> String {
    let mut s = String::from("label");
    for j in 0..z.ncols() {
        s.push_str(&format!(",d{}", j + 1));
    }
    s.push('\n');
    for (i, name) in data.decoded_labels().iter().enumerate() {
        s.push_str(name);
        for j in 0..z.ncols() {
            s.push_str(&format!(",{:.16e}", z[(i, j)]));
        }
        s.push('\n');
    }
    s
}

fn projection_json(z: &nalgebra::DMatrix<f64>, data: &LabeledDataset) -> godisc_core::Result<String> {
    #[derive(Serialize)]
    struct Projection<'a> {
        labels: Vec<&'a str>,
        rows: Vec<Vec<f64>>,
    }
    godisc_core::json::to_string(&Projection {
        labels: data.decoded_labels(),
        rows: z.row_iter().map(|r| r.iter().copied().collect()).collect(),
    })
}

fn emit_report(out: &OutputArgs, format: Format, report: &godisc_core::EvalReport) -> CliResult<()> {
    let text = match format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
        _ => report.to_table(),
    };
    emit(out, &text)
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::Compute(godisc_core::Error::Io {
                path: path.clone(),
                source: e,
            })
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| {
                    Failure::Compute(godisc_core::Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source: e,
                    })
                })
        }
    }
}
