//! Runs the nine acceptance criteria and prints one line per criterion.
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use lil_core::suite::{self, SuiteConfig};

fn main() -> ExitCode {
    let seed = std::env::var("LIL_SUITE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(42);
    let cfg = SuiteConfig::new(seed);
    println!("acceptance suite, seed {seed}");
    let results = suite::run_all(&cfg);
    for r in &results {
        println!("{}", r.summary_line());
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.ok()).collect();
    for r in &failed {
        eprintln!("criterion {} details: {}", r.id, r.details);
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of {} criteria failed", failed.len(), results.len());
        ExitCode::FAILURE
    }
}
