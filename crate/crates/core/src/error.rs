use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("class {0:?} has no samples")]
    EmptyClass(String),
    #[error("{0}")]
    Shape(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("no dataset named {0:?} in the registry")]
    UnknownDataset(String),
    #[error("registry {path}, line {line}: {message}")]
    Registry {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("within-class scatter is not positive definite (delta = {delta})")]
    SingularWithinScatter { delta: f64 },
    #[error("operation needs exactly two classes, found {0}")]
    NotBinary(usize),
    #[error("zero direction vector")]
    ZeroVector,
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("dominant eigenvalue {value} has imaginary part {imag}")]
    ComplexDominant { value: f64, imag: f64 },
    #[error("requested {requested} directions but at most {limit} are available")]
    KTooLarge { requested: usize, limit: usize },
    #[error("direction {index} is linearly dependent on earlier directions")]
    DegenerateDirection { index: usize },
    #[error("constraint matrix T is not positive definite")]
    SingularT,
    #[error("direction {index} overlaps earlier directions by {overlap:e}")]
    OrthogonalityLoss { index: usize, overlap: f64 },
    #[error("recursion matrix S_{{n-1}} is not positive definite at step {step}")]
    SingularRecursionMatrix { step: usize },
    #[error("shape mismatch: expected {expected} columns, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error(
        "covariance{} is not positive definite after ridge",
        .class.map(|c| format!(" of class {c}")).unwrap_or_default()
    )]
    DegenerateCovariance { class: Option<usize> },
    #[error("{samples} samples cannot be split into {folds} folds")]
    TooFewSamples { samples: usize, folds: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable variant name, used by the CLI in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::EmptyClass(_) => "EmptyClass",
            Error::Shape(_) => "ShapeError",
            Error::InvalidDataset(_) => "InvalidDataset",
            Error::UnknownDataset(_) => "UnknownDataset",
            Error::Registry { .. } => "RegistryError",
            Error::Io { .. } => "IoError",
            Error::SingularWithinScatter { .. } => "SingularWithinScatter",
            Error::NotBinary(_) => "NotBinary",
            Error::ZeroVector => "ZeroVector",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::ComplexDominant { .. } => "ComplexDominant",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::DegenerateDirection { .. } => "DegenerateDirection",
            Error::SingularT => "SingularT",
            Error::OrthogonalityLoss { .. } => "OrthogonalityLoss",
            Error::SingularRecursionMatrix { .. } => "SingularRecursionMatrix",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::DegenerateCovariance { .. } => "DegenerateCovariance",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Json(_) => "JsonError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
