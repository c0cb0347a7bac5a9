use thiserror::Error;

/// Errors produced by construction and evaluation of workbench objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("atom index {index} out of range (atom count {count})")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("unknown atom label {label}")]
    UnknownLabel { label: u32 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid atomic space: {0}")]
    InvalidSpace(String),

    #[error("invalid random variable: {0}")]
    InvalidRandomVariable(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("sequence position {position} out of range (window length {length})")]
    PositionOutOfRange { position: usize, length: usize },

    #[error("convex weights must sum to 1 within {tolerance}, got {sum}")]
    WeightSum { sum: f64, tolerance: f64 },

    #[error("atoms without Bounded/Unbounded metadata in exact mode: {labels:?}")]
    UnknownMetadata { labels: Vec<u32> },

    #[error(
        "declared bound violated on atom {label}: c = {observed} at n = {index} exceeds C = {declared}"
    )]
    MetadataViolation {
        label: u32,
        declared: f64,
        observed: f64,
        index: u64,
    },

    #[error(
        "L1 certificate violated at window position {position} (worst atom {label}): \
         checked sup {checked_sup} exceeds bound {bound}"
    )]
    CertificateViolation {
        position: usize,
        label: u32,
        checked_sup: f64,
        bound: f64,
    },

    #[error("window too short: length {length}, need at least {required}")]
    WindowTooShort { length: usize, required: usize },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenerator(String),

    #[error("too few Monte Carlo paths: {got}, need at least {required}")]
    TooFewPaths { got: usize, required: usize },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("pipeline stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
