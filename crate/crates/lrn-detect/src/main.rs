use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use lrn_detect::format::read_text;
use lrn_detect::suites::Suite;
use lrn_detect::{exit, AnalysisRequest, InputSource, Options, OutputFormat, Pipeline};

/// Long-range nonstabilizerness of translation-invariant MPS.
///
/// Exit codes: 0 certified (or success), 1 error, 2 exact short-range magic
/// excluded only, 3 inconclusive, 4 verification failure or replay mismatch.
#[derive(Debug, Parser)]
#[command(name = "lrn-detect", version)]
struct Cli {
    /// Pipeline to run.
    #[arg(long, value_enum, required_unless_present = "replay")]
    pipeline: Option<Pipeline>,
    /// Tensor or weight JSON (analyze, rg), tableau text (stab, verify).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    /// Circuit depth for the verify suites.
    #[arg(long)]
    depth: Option<usize>,
    /// Distance from the integers below which an entropy counts as integer.
    #[arg(long)]
    tol_int: Option<f64>,
    /// Largest denominator in the rationality test.
    #[arg(long)]
    qmax: Option<u64>,
    /// Qubits of region A, comma separated (stab).
    #[arg(long, value_delimiter = ',')]
    region: Option<Vec<usize>>,
    /// Qubits of region B, comma separated (stab).
    #[arg(long, value_delimiter = ',')]
    region_b: Option<Vec<usize>>,
    /// `|α|²` as a rational, scaled root or decimal (ghz).
    #[arg(long)]
    alpha_sq: Option<String>,
    /// Random sample count for every verify suite.
    #[arg(long)]
    trials: Option<usize>,
    /// Verify suites to run (repeatable).
    #[arg(long = "suite", value_enum)]
    suites: Option<Vec<Suite>>,
    /// Re-run the request stored in a JSON report and compare.
    #[arg(long, conflicts_with_all = ["pipeline", "input"])]
    replay: Option<PathBuf>,
}

impl Cli {
    fn request(self) -> anyhow::Result<AnalysisRequest> {
        let input = match &self.input {
            Some(p) => Some(InputSource { path: p.display().to_string(), content: read_text(p)? }),
            None => None,
        };
        Ok(AnalysisRequest {
            pipeline: self.pipeline.context("--pipeline is required")?,
            input,
            options: Options {
                seed: self.seed,
                jobs: self.jobs,
                format: self.format,
                n_min: self.n_min,
                n_max: self.n_max,
                depth: self.depth,
                tol_int: self.tol_int,
                qmax: self.qmax,
                region: self.region,
                region_b: self.region_b,
                alpha_sq: self.alpha_sq,
                trials: self.trials,
                suites: self.suites,
            },
        })
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn main_inner() -> anyhow::Result<i32> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on bad arguments, which is a verdict code here.
            let code = if e.use_stderr() { exit::ERROR } else { exit::OK };
            e.print()?;
            return Ok(code);
        }
    };
    let cache = std::env::var_os("LRN_DETECT_CACHE").map(PathBuf::from);
    let out = cli.out.clone();
    if let Some(path) = &cli.replay {
        let r = lrn_detect::replay(&read_text(path)?, cache.as_deref())?;
        emit(&r.outcome.render()?, out.as_ref())?;
        if !r.matches {
            eprintln!("replay of {} does not reproduce the stored report", path.display());
            return Ok(exit::VERIFY_FAILED);
        }
        return Ok(r.outcome.exit_code());
    }
    let outcome = lrn_detect::run(&cli.request()?, cache.as_deref())?;
    emit(&outcome.render()?, out.as_ref())?;
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::ERROR as u8)
        }
    }
}
