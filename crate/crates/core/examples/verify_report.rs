//! Runs every registered check at a small sample size and prints the report
//! summary; `cargo run --bin fisher-kahler -- verify` runs the full suite.

use fisher_kahler::verify::{run_verify, uncovered_invariants, VerifyConfig, REGISTRY};

fn main() -> fisher_kahler::Result<()> {
    println!("{} registered checks, uncovered invariants: {:?}", REGISTRY.len(), uncovered_invariants());
    let config = VerifyConfig { samples: 50, ..VerifyConfig::default() };
    let report = run_verify(&config, None)?;
    for r in report.records.iter().filter(|r| r.n == 5) {
        println!(
            "{:5} {:36} error {:.2e} tolerance {:.0e}",
            if r.pass { "pass" } else { "FAIL" },
            r.name,
            r.max_abs_error,
            r.tolerance
        );
    }
    println!("overall pass: {}", report.overall_pass);
    Ok(())
}
