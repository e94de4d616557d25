//! Runs the full verification suite with the default configuration and
//! prints one line per check, then the recorded values.
//!
//! `cargo run --release --example verify_report`

use circle_cs::verify::{self, VerifyConfig};

pub fn run() -> verify::VerifyReport {
    let report = verify::run(&VerifyConfig::default()).expect("default config is valid");
    for c in &report.checks {
        println!(
            "{:>4}  {:<46} {:>12.3e}  (tol {:.1e}, {} cases)",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.max_abs_error,
            c.tolerance,
            c.n_cases
        );
    }
    for r in &report.recorded {
        println!("      {:<46} {:.7e}", r.name, r.value);
    }
    report
}

#[allow(dead_code)]
fn main() {
    let report = run();
    let failed = report.failed().count();
    println!("{} checks, {} failed", report.checks.len(), failed);
}
