use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid config field `{field}`: {msg}")]
    Field { field: String, msg: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdlError {
    #[error("segment {index} starts at {start} but the previous segment ends at {prev_end} (overlap)")]
    Overlap { index: usize, start: usize, prev_end: usize },
    #[error("segment {index} starts at {start} but the previous segment ends at {prev_end} (gap)")]
    Gap { index: usize, start: usize, prev_end: usize },
    #[error("segment {index} is empty")]
    EmptySegment { index: usize },
    #[error("segment {index} repeats camera `{camera}` of the previous segment")]
    RepeatedCamera { index: usize, camera: String },
    #[error("edit list covers {covered} instances, timeline has {expected}")]
    Coverage { covered: usize, expected: usize },
    #[error("edit list references unknown camera `{0}`")]
    UnknownCamera(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum DetectorError {
    #[error("grid must be at least 2x2, got {rows}x{cols}")]
    DegenerateGrid { rows: usize, cols: usize },
    #[error("grid has {channels} channels, expected 1 or 3")]
    Channels { channels: usize },
    #[error("grid data has {found} values, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("grid contains non-finite values")]
    NonFinite,
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize, usize), (usize, usize, usize)),
    #[error("series of length {len} is too short: need more than {need}")]
    SeriesTooShort { len: usize, need: usize },
    #[error("invalid detector parameter `{name}`: {msg}")]
    Param { name: &'static str, msg: String },
    #[error("probability {value} at t={t} is outside [0, 1]")]
    ProbabilityRange { t: usize, value: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("window {start}..{end} exceeds the score timeline of {len} instances")]
    OutOfRange { start: usize, end: usize, len: usize },
    #[error("initial camera {camera} does not exist ({cameras} cameras)")]
    BadInitialCamera { camera: usize, cameras: usize },
    #[error("run-length cap {cap} is too small, need at least {min}")]
    BadCap { cap: usize, min: usize },
    #[error("brute force would enumerate {cameras}^{horizon} sequences, over the limit of {limit}")]
    TooLarge { cameras: usize, horizon: usize, limit: u64 },
    #[error("sequence has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("sequence entry {value} at position {index} is not a camera index")]
    BadCamera { index: usize, value: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("invalid baseline parameter `{name}`: {msg}")]
    Param { name: &'static str, msg: String },
    #[error("fsm spec references unknown camera `{0}`")]
    UnknownCamera(String),
    #[error("scenario has an empty timeline or no cameras")]
    EmptyScenario,
}

#[derive(Debug, Error, PartialEq)]
pub enum ScriptError {
    #[error("event {index}: {msg}")]
    Event { index: usize, msg: String },
    #[error("invalid script: {0}")]
    Invalid(String),
}

/// Crate-level error used by file IO and multi-stage operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: parse error: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid scenario: {}", join_violations(.0))]
    InvalidScenario(Vec<Violation>),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid edit list: {0}")]
    Edl(#[from] EdlError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("{0}")]
    Invalid(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
