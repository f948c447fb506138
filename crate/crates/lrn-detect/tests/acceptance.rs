//! Runs every acceptance criterion at full size and prints one line each.
//! Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use lrn_detect::suites::{run_suite, Suite, SuiteParams};

const CRITERIA: [(&str, Suite); 8] = [
    ("ghz grid classification", Suite::Ghz),
    ("irrational counterexample", Suite::Counterexample),
    ("stabilizer entropy quantization", Suite::Stabilizer),
    ("mutual information invariance", Suite::Invariance),
    ("causal cone reduction", Suite::Cone),
    ("mps structure", Suite::Mps),
    ("fannes bound", Suite::Fannes),
    ("typicality decay", Suite::Typicality),
];

fn main() -> ExitCode {
    let params = SuiteParams::default();
    let mut failed = 0;
    for (k, (label, suite)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let r = run_suite(*suite, &params);
        let secs = start.elapsed().as_secs_f64();
        let value = r.value.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {} {label}: {} cases, {} = {value}, {secs:.1}s",
            k + 1,
            r.cases,
            r.metric
        );
        if !r.passed() {
            failed += 1;
            for f in r.failures.iter().take(5) {
                println!("    case {}: {}", f.case, f.detail);
            }
            if r.failures.len() > 5 {
                println!("    ... {} more", r.failures.len() - 5);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
