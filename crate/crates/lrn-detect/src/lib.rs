//! File formats, analysis pipelines and invariant suites on top of `lrn-core`.

pub mod cache;
pub mod error;
pub mod format;
pub mod pipeline;
pub mod report;
pub mod request;
pub mod suites;
pub mod weights;

pub use error::{DetectError, Result};
pub use lrn_core;
pub use pipeline::{exit, replay, run, Outcome, Replay};
pub use request::{AnalysisRequest, InputSource, Options, OutputFormat, Pipeline};
