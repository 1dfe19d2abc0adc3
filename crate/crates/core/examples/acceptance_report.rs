//! Runs selected acceptance criteria (all by default) and prints the
//! report as JSON. Criterion ids are taken from the command line, e.g.
//! `cargo run --release --example acceptance_report -- 1 5 9`.

use kgzones::acceptance::{run_criterion, AcceptanceConfig, CRITERIA};

fn main() {
    let cfg = AcceptanceConfig::default();
    let mut ids: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if ids.is_empty() {
        ids = CRITERIA.iter().map(|c| c.0).collect();
    }
    let results: Vec<_> = ids.iter().map(|&id| run_criterion(id, &cfg)).collect();
    for r in &results {
        eprintln!("{}", r.summary_line());
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&results).expect("report serializes")
    );
}
