//! Runs the twelve acceptance criteria and prints one line per criterion.
//! Built without the libtest harness so the lines always appear.

use std::process::ExitCode;
use std::time::Instant;

use kgzones::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = AcceptanceConfig::default();
    let start = Instant::now();
    let mut failed = 0;
    println!("acceptance suite: {} criteria", CRITERIA.len());
    for (id, _) in CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{}", r.summary_line());
        if !r.passed {
            failed += 1;
            for c in r.checks.iter().filter(|c| !c.passed) {
                println!(
                    "       failing check: {} = {:e} (threshold {:e})",
                    c.what, c.measured, c.threshold
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1} s)",
        CRITERIA.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
