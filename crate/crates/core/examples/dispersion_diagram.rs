//! Real dispersion branches of the coupled waveguide, plus the structural
//! points that organise everything else: cut-offs, the exchange point,
//! branch points off the real axis and group-velocity extrema.
//!
//! Run with `cargo run --example dispersion_diagram`.

use kgzones::dispersion::sample_diagram;
use kgzones::{Result, Waveguide};

fn main() -> Result<()> {
    let wg = Waveguide::preset();
    let p = &wg.params;
    let cp = &wg.points;
    println!(
        "params: c1={} c2={} Ω1={} Ω2={} μ={}",
        p.c1, p.c2, p.omega1, p.omega2, p.mu
    );
    println!("cut-offs: {:?}", wg.structure.cutoffs);
    println!(
        "exchange point: ω_sh={:.6} k_sh={:.6}, unperturbed group velocities v1={:.6} v2={:.6}",
        cp.omega_sh, cp.k_sh, cp.v1, cp.v2
    );
    for z in &wg.structure.exchange_points {
        println!("  branch point ω = {:.6} {:+.6}i", z.re, z.im);
    }
    println!("analytic strip |Im ω| < {:.5}", wg.strip_height());
    if let Some(ext) = wg.structure.extrema {
        for e in [ext.max, ext.min] {
            println!(
                "  {:?} of group velocity on branch {:?}: v'={:.10} at ω={:.5} (α={:+.5})",
                e.kind, e.branch, e.velocity, e.omega, e.alpha
            );
        }
    }

    println!(
        "\n{:>8} {:>10} {:>10} {:>8} {:>8}",
        "ω", "k1", "k2", "vg1", "vg2"
    );
    let lo = wg.structure.cutoffs[0].max(wg.structure.cutoffs[1]) + 0.05;
    for s in sample_diagram(p, lo, 2.0 * cp.omega_sh, 16)? {
        println!(
            "{:8.4} {:10.5} {:10.5} {:8.5} {:8.5}",
            s.omega, s.k1, s.k2, s.vg1, s.vg2
        );
    }
    Ok(())
}
