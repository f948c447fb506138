use std::path::Path;

use lrn_core::criteria::{
    ghz_classify, theorem1_check, theorem2_check, typicality_log_ratio, ExactWeight, Status, TypicalityParams,
    DEFAULT_N_WINDOW, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_INT, DEFAULT_TAU_RAT,
};
use lrn_core::dense::{mutual_information, region_entropy, stabilizer_dense_state};
use lrn_core::mps::{
    canonical_decompose_with, rg_fixed_point_from, CanonicalOptions, WeightSpectrum, DEFAULT_RG_MAX_ITER,
    DEFAULT_RG_TOL, DEFAULT_TAU_RANK,
};
use lrn_core::math;
use serde::Serialize;
use serde_json::json;

use crate::cache;
use crate::error::{DetectError, Result};
use crate::format::{parse_spectrum_input, parse_tableau, SpectrumInput};
use crate::report::{weight_view, CanonicalView, FixedPointView, Report, TraceRowView, VerdictView};
use crate::request::{AnalysisRequest, OutputFormat, Pipeline};
use crate::suites::{run_suite, tableau_suite, Suite, SuiteParams};
use crate::weights::{format_weight, parse_weight};

/// Process exit codes.
pub mod exit {
    pub const LRN_CERTIFIED: i32 = 0;
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    pub const EXACT_SRN_EXCLUDED: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    pub const VERIFY_FAILED: i32 = 4;
}

/// Transfer eigenvalues listed in the analysis report.
const SPECTRUM_SHOWN: usize = 8;

/// Result of a run: the report and, for CSV requests, the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.report.exit_code
    }

    /// The text written to the output: the CSV table or the JSON report.
    pub fn render(&self) -> Result<String> {
        match (&self.csv, self.report.request.options.format) {
            (Some(csv), OutputFormat::Csv) => Ok(csv.clone()),
            _ => Ok(serde_json::to_string_pretty(&self.report)? + "\n"),
        }
    }
}

struct Body {
    status: String,
    exit_code: i32,
    result: serde_json::Value,
    csv: Option<String>,
}

fn body(status: &str, exit_code: i32, result: impl Serialize) -> Result<Body> {
    Ok(Body { status: status.into(), exit_code, result: serde_json::to_value(result)?, csv: None })
}

fn input_text(req: &AnalysisRequest) -> Result<&str> {
    req.input
        .as_ref()
        .map(|i| i.content.as_str())
        .ok_or_else(|| DetectError::Request(format!("the {} pipeline needs --input", req.pipeline.name())))
}

/// Runs a validated request. `cache_dir` enables spectrum memoization.
pub fn run(req: &AnalysisRequest, cache_dir: Option<&Path>) -> Result<Outcome> {
    req.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = req.options.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| DetectError::Request(format!("thread pool: {e}")))?;
    let b = pool.install(|| match req.pipeline {
        Pipeline::Analyze => analyze(req, cache_dir),
        Pipeline::Rg => rg(req),
        Pipeline::Verify => verify(req),
        Pipeline::Stab => stab(req),
        Pipeline::Ghz => ghz(req),
        Pipeline::Typicality => typicality(req),
    })?;
    Ok(Outcome {
        report: Report { request: req.clone(), status: b.status, exit_code: b.exit_code, result: b.result },
        csv: b.csv,
    })
}

/// Outcome of re-running the request embedded in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub outcome: Outcome,
    pub matches: bool,
}

pub fn replay(report_text: &str, cache_dir: Option<&Path>) -> Result<Replay> {
    let old: Report = serde_json::from_str(report_text)?;
    let outcome = run(&old.request, cache_dir)?;
    let matches = outcome.report == old;
    Ok(Replay { outcome, matches })
}

fn window(req: &AnalysisRequest) -> std::ops::RangeInclusive<u64> {
    let lo = req.options.n_min.unwrap_or(*DEFAULT_N_WINDOW.start());
    let hi = req.options.n_max.unwrap_or((*DEFAULT_N_WINDOW.end()).max(lo));
    lo..=hi
}

fn constant_spectrum(weights: &[ExactWeight]) -> WeightSpectrum {
    let amps: Vec<f64> = weights.iter().map(|w| w.value().max(0.0).sqrt()).collect();
    WeightSpectrum::constant(&amps)
}

fn combined_status(entropy: &lrn_core::criteria::Verdict, ratio: Option<&lrn_core::criteria::Verdict>) -> (Status, i32) {
    if entropy.status == Status::LrnCertified {
        (Status::LrnCertified, exit::LRN_CERTIFIED)
    } else if ratio.is_some_and(|r| r.status == Status::ExactSrnExcluded) {
        (Status::ExactSrnExcluded, exit::EXACT_SRN_EXCLUDED)
    } else {
        (Status::Inconclusive, exit::INCONCLUSIVE)
    }
}

fn analyze(req: &AnalysisRequest, cache_dir: Option<&Path>) -> Result<Body> {
    let o = &req.options;
    let tau_int = o.tol_int.unwrap_or(DEFAULT_TAU_INT);
    let q_max = o.qmax.unwrap_or(DEFAULT_Q_MAX_RAT);
    let mut result = serde_json::Map::new();
    let (spectrum, exact) = match parse_spectrum_input(input_text(req)?)? {
        SpectrumInput::Tensor(file) => {
            let a = file.tensor()?;
            let cf = canonical_decompose_with(&a, &CanonicalOptions::default())?;
            let f = rg_fixed_point_from(&cf, DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER, DEFAULT_TAU_RANK)?;
            let ev = cache::transfer_spectrum(&a, cache_dir)?;
            let shown: Vec<[f64; 2]> = ev.iter().take(SPECTRUM_SHOWN).map(|z| [z.re, z.im]).collect();
            result.insert("transfer_spectrum".into(), serde_json::to_value(shown)?);
            result.insert("canonical_form".into(), serde_json::to_value(CanonicalView::from(&cf))?);
            result.insert("fixed_point".into(), serde_json::to_value(FixedPointView::from(&f))?);
            match file.weights() {
                Some(w) => {
                    if w.len() != f.weights.len() {
                        return Err(DetectError::Format(format!(
                            "{} exact weights given for {} blocks",
                            w.len(),
                            f.weights.len()
                        )));
                    }
                    (constant_spectrum(&w), Some(w))
                }
                None => (f.weights.clone(), None),
            }
        }
        SpectrumInput::Weights(w) => (constant_spectrum(&w), Some(w)),
    };
    result.insert(
        "weights_source".into(),
        json!(if exact.is_some() { "exact_weights" } else { "tensor" }),
    );
    if let Some(w) = &exact {
        let text: Vec<String> = w.iter().map(format_weight).collect();
        result.insert("exact_weights".into(), json!(text));
    }
    result.insert("weight_spectrum".into(), serde_json::to_value(weight_view(&spectrum))?);
    let entropy = theorem1_check(&spectrum, window(req), tau_int)?;
    let ratio = exact.as_ref().map(|w| theorem2_check(w, q_max, DEFAULT_TAU_RAT));
    let (status, code) = combined_status(&entropy, ratio.as_ref());
    result.insert(
        "verdicts".into(),
        json!({
            "entropy_criterion": VerdictView::from(&entropy),
            "ratio_criterion": ratio.as_ref().map(VerdictView::from),
        }),
    );
    result.insert("status".into(), json!(status.label()));
    body(status.label(), code, result)
}

fn rg(req: &AnalysisRequest) -> Result<Body> {
    let a = match parse_spectrum_input(input_text(req)?)? {
        SpectrumInput::Tensor(file) => file.tensor()?,
        SpectrumInput::Weights(_) => return Err(DetectError::Format("the rg pipeline needs a tensor".into())),
    };
    let cf = canonical_decompose_with(&a, &CanonicalOptions::default())?;
    let f = rg_fixed_point_from(&cf, DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER, DEFAULT_TAU_RANK)?;
    let trace: Vec<TraceRowView> = f.trace.iter().map(TraceRowView::from).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "block", "physical_dim", "lambda2", "cross"])?;
    for row in &trace {
        for (k, l) in row.lambda2.iter().enumerate() {
            w.write_record([
                row.step.to_string(),
                k.to_string(),
                row.physical_dim.to_string(),
                format!("{l:e}"),
                format!("{:e}", row.cross),
            ])?;
        }
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| DetectError::Format(e.to_string()))?)
        .expect("CSV writer emits UTF-8");
    let mut b = body(
        "CONVERGED",
        exit::OK,
        json!({
            "multi_block": f.blocks.len() > 1,
            "trace": trace,
            "fixed_point": FixedPointView::from(&f),
        }),
    )?;
    b.csv = Some(csv);
    Ok(b)
}

fn verify(req: &AnalysisRequest) -> Result<Body> {
    let o = &req.options;
    let defaults = SuiteParams::default();
    let mut params = SuiteParams {
        seed: o.seed,
        depth: o.depth.unwrap_or(defaults.depth),
        tau_int: o.tol_int.unwrap_or(defaults.tau_int),
        typicality_n: (
            o.n_min.map_or(defaults.typicality_n.0, |n| n as u32),
            o.n_max.map_or(defaults.typicality_n.1, |n| n as u32),
        ),
        ..defaults
    };
    if let Some(t) = o.trials {
        params = params.with_trials(t);
    }
    let requested = o.suites.clone().unwrap_or_else(|| Suite::DEFAULT.to_vec());
    let mut suites: Vec<Suite> = Vec::new();
    if req.input.is_some() {
        suites.push(Suite::Tableau);
    }
    for s in requested {
        if !suites.contains(&s) {
            suites.push(s);
        }
    }
    let reports: Vec<_> = suites
        .iter()
        .map(|&s| match (s, &req.input) {
            (Suite::Tableau, Some(input)) => tableau_suite(&input.content),
            _ => run_suite(s, &params),
        })
        .collect();
    let passed = reports.iter().all(|r| r.passed());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "cases", "failures", "metric", "value"])?;
    for r in &reports {
        w.write_record([
            r.suite.name().to_string(),
            r.cases.to_string(),
            r.failures.len().to_string(),
            r.metric.clone(),
            r.value.map_or(String::new(), |v| format!("{v:e}")),
        ])?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| DetectError::Format(e.to_string()))?)
        .expect("CSV writer emits UTF-8");
    let (status, code) = if passed { ("PASS", exit::OK) } else { ("FAIL", exit::VERIFY_FAILED) };
    let mut b = body(status, code, json!({ "passed": passed, "params": params, "suites": reports }))?;
    b.csv = Some(csv);
    Ok(b)
}

fn parse_region(region: &[usize], n: usize) -> Result<Vec<usize>> {
    if let Some(&q) = region.iter().find(|&&q| q >= n) {
        return Err(DetectError::Request(format!("qubit {q} out of range for {n} qubits")));
    }
    Ok(region.to_vec())
}

fn stab(req: &AnalysisRequest) -> Result<Body> {
    let t = parse_tableau(input_text(req)?)?;
    let n = t.n();
    let a = parse_region(req.options.region.as_deref().unwrap_or_default(), n)?;
    let b = req.options.region_b.as_deref().map(|r| parse_region(r, n)).transpose()?;
    let dense = if n <= 12 { Some(stabilizer_dense_state(&t)?) } else { None };
    let entropy = t.entropy(&a)?;
    let dense_entropy = dense.as_ref().map(|psi| region_entropy(psi, &a)).transpose()?;
    let (mi, dense_mi) = match &b {
        Some(b) => (
            Some(t.mutual_information(&a, b)?),
            dense.as_ref().map(|psi| mutual_information(psi, &a, b)).transpose()?,
        ),
        None => (None, None),
    };
    let canonical = t.canonicalize()?;
    body(
        "OK",
        exit::OK,
        json!({
            "qubits": n,
            "generators": canonical.to_text().lines().collect::<Vec<_>>(),
            "region": a,
            "region_b": b,
            "entropy": entropy,
            "dense_entropy": dense_entropy,
            "mutual_information": mi,
            "dense_mutual_information": dense_mi,
        }),
    )
}

fn ghz(req: &AnalysisRequest) -> Result<Body> {
    let text = req.options.alpha_sq.as_deref().unwrap_or_default();
    let w = parse_weight(text)?;
    let class = ghz_classify(&w)?;
    let p = w.value().clamp(0.0, 1.0);
    let spectrum = WeightSpectrum::constant(&[p.sqrt(), (1.0 - p).sqrt()]);
    let verdict = theorem1_check(&spectrum, 1..=1, req.options.tol_int.unwrap_or(DEFAULT_TAU_INT))?;
    body(
        class.label(),
        exit::OK,
        json!({
            "alpha_sq": format_weight(&w),
            "value": w.value(),
            "class": class.label(),
            "entropy": math::binary_entropy(p),
            "entropy_criterion": VerdictView::from(&verdict),
        }),
    )
}

#[derive(Serialize)]
struct TypicalityRow {
    n: u32,
    log_ratio: f64,
}

fn typicality(req: &AnalysisRequest) -> Result<Body> {
    let lo = req.options.n_min.unwrap_or(20) as u32;
    let hi = req.options.n_max.map_or(lo.max(40), |n| n as u32);
    let p = TypicalityParams::default();
    let rows: Vec<TypicalityRow> = (lo..=hi).map(|n| TypicalityRow { n, log_ratio: typicality_log_ratio(n, &p) }).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| DetectError::Format(e.to_string()))?)
        .expect("CSV writer emits UTF-8");
    let all_negative = rows.iter().all(|r| r.log_ratio < 0.0);
    let mut b = body(
        if all_negative { "NEGATIVE" } else { "NOT_NEGATIVE" },
        exit::OK,
        json!({
            "params": {
                "depth_exponent": p.depth_exponent,
                "eps0": p.eps0,
                "alpha": p.alpha,
                "n_g": p.n_g,
                "polylog_exponent": p.polylog_exponent,
            },
            "rows": rows,
        }),
    )?;
    b.csv = Some(csv);
    Ok(b)
}
