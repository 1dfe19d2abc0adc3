//! Zone diagram in the (t, V) plane. The exchange preset is used because
//! its weak coupling gives every zone type, including J and Q.
//! Pass `default` as the first argument to use the reference preset.

use std::collections::BTreeMap;

use kgzones::zones::{parent_of, zone_diagram, DEFAULT_S};
use kgzones::{Result, Waveguide, WaveguideParams};

fn main() -> Result<()> {
    let params = match std::env::args().nth(1).as_deref() {
        Some("default") => WaveguideParams::preset(),
        _ => WaveguideParams::exchange_preset(),
    };
    let wg = Waveguide::new(params)?;
    let d = zone_diagram(&wg, (1.0, 500.0), (0.5, 2.5), (200, 120), DEFAULT_S)?;

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for row in &d.labels {
        for l in row {
            *counts.entry(l.to_string()).or_default() += 1;
        }
    }
    println!("cells per label:");
    for (label, n) in &counts {
        let parent = parent_of(label)?.unwrap_or("-");
        println!("  {label:<10} {n:>6}   parent {parent}");
    }
    for b in &d.boundaries {
        let pts: usize = b.polylines.iter().map(Vec::len).sum();
        println!(
            "boundary {:<10} {} polylines, {pts} points",
            b.pair.name(),
            b.polylines.len()
        );
    }

    // coarse picture, slow velocities at the bottom
    let sym = |s: &str| match s {
        "0" => ' ',
        "B" => 'B',
        s if s.starts_with('Q') => 'Q',
        s if s.starts_with('J') => 'J',
        s if s.starts_with("Ai") => 'A',
        s if s.contains("SPe") => 'e',
        _ => '.',
    };
    for row in d.labels.iter().rev().step_by(6) {
        let line: String = row.iter().step_by(3).map(|l| sym(&l.to_string())).collect();
        println!("|{line}|");
    }
    Ok(())
}
