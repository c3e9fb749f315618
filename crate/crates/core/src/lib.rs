//! Semantics-driven multi-camera lecture editing.
//!
//! Per-camera event indicators become semantic focus scores
//! ([`scoring::semantic_scores`]), which together with soft transition,
//! switch-length and B-roll rules define a per-instance step reward. The
//! [`solver`] module picks one camera per instance to maximize the summed
//! reward, either offline or in look-ahead chunks.

pub mod detectors;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod baselines;
pub mod benchmark;
pub mod scoring;
pub mod simgen;
pub mod solver;

pub use error::{Error, Result};
pub use model::{EditConfig, EditDecisionList, Scenario, Segment, ShotKind};
