//! Acceptance criteria: prints one line per check and a pass/fail line per
//! criterion, and fails if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use deficit_atlas::verify::{criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (n, title) in CRITERIA {
        let start = Instant::now();
        let checks = criterion(n);
        for c in &checks {
            let status = if c.pass { "ok" } else { "FAILED" };
            println!(
                "    {:<42} expected {:>14.8e}  computed {:>14.8e}  tol {:>8.1e}  {status}",
                c.name, c.expected, c.computed, c.tolerance
            );
            if let Some(e) = &c.error {
                println!("      error: {e}");
            }
        }
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        println!(
            "criterion {n:>2} {title:<45} {} ({:.2?})",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed()
        );
        if !pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
