use serde::{Deserialize, Serialize};

use crate::error::{DetectError, Result};
use crate::suites::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    /// Canonical form, RG fixed point and both weight criteria.
    Analyze,
    /// RG flow trace.
    Rg,
    /// Invariant suites against the dense oracles.
    Verify,
    /// Entropies of a stabilizer tableau.
    Stab,
    /// Classification of a GHZ-family weight.
    Ghz,
    /// Circuit-counting estimate over a range of sizes.
    Typicality,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Analyze => "analyze",
            Pipeline::Rg => "rg",
            Pipeline::Verify => "verify",
            Pipeline::Stab => "stab",
            Pipeline::Ghz => "ghz",
            Pipeline::Typicality => "typicality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// The input file, kept verbatim so that a report can be replayed without it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSource {
    pub path: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_int: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_b: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_sq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<Suite>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSource>,
    #[serde(default)]
    pub options: Options,
}

impl AnalysisRequest {
    pub fn new(pipeline: Pipeline) -> Self {
        Self { pipeline, input: None, options: Options::default() }
    }

    /// Checks that the options fit the pipeline.
    pub fn validate(&self) -> Result<()> {
        use Pipeline::*;
        let o = &self.options;
        let set = [
            ("--n-min", o.n_min.is_some(), &[Analyze, Verify, Typicality][..]),
            ("--n-max", o.n_max.is_some(), &[Analyze, Verify, Typicality]),
            ("--depth", o.depth.is_some(), &[Verify]),
            ("--tol-int", o.tol_int.is_some(), &[Analyze, Ghz, Verify]),
            ("--qmax", o.qmax.is_some(), &[Analyze]),
            ("--region", o.region.is_some(), &[Stab]),
            ("--region-b", o.region_b.is_some(), &[Stab]),
            ("--alpha-sq", o.alpha_sq.is_some(), &[Ghz]),
            ("--trials", o.trials.is_some(), &[Verify]),
            ("--suite", o.suites.is_some(), &[Verify]),
        ];
        for (flag, present, allowed) in set {
            if present && !allowed.contains(&self.pipeline) {
                return Err(DetectError::Request(format!("{flag} does not apply to the {} pipeline", self.pipeline.name())));
            }
        }
        let needs_input = matches!(self.pipeline, Analyze | Rg | Stab);
        let takes_input = needs_input || self.pipeline == Verify;
        match (&self.input, needs_input, takes_input) {
            (None, true, _) => {
                return Err(DetectError::Request(format!("the {} pipeline needs --input", self.pipeline.name())))
            }
            (Some(_), _, false) => {
                return Err(DetectError::Request(format!("the {} pipeline takes no --input", self.pipeline.name())))
            }
            _ => {}
        }
        if o.format == OutputFormat::Csv && !matches!(self.pipeline, Rg | Verify | Typicality) {
            return Err(DetectError::Request(format!("CSV output is not available for {}", self.pipeline.name())));
        }
        if self.pipeline == Stab && o.region.is_none() {
            return Err(DetectError::Request("the stab pipeline needs --region".into()));
        }
        if self.pipeline == Ghz && o.alpha_sq.is_none() {
            return Err(DetectError::Request("the ghz pipeline needs --alpha-sq".into()));
        }
        if o.jobs == Some(0) {
            return Err(DetectError::Request("--jobs must be positive".into()));
        }
        if o.tol_int.is_some_and(|t| !(t > 0.0 && t < 0.5)) {
            return Err(DetectError::Request("--tol-int must lie in (0, 1/2)".into()));
        }
        if o.qmax == Some(0) {
            return Err(DetectError::Request("--qmax must be positive".into()));
        }
        if o.n_min == Some(0) {
            return Err(DetectError::Request("--n-min must be positive".into()));
        }
        if let (Some(a), Some(b)) = (o.n_min, o.n_max) {
            if a > b {
                return Err(DetectError::Request("--n-min exceeds --n-max".into()));
            }
        }
        if self.pipeline == Typicality && o.n_max.or(o.n_min).is_some_and(|n| n > u32::MAX as u64) {
            return Err(DetectError::Request("system size out of range".into()));
        }
        Ok(())
    }
}
