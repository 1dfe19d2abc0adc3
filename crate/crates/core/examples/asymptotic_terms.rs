//! The closed-form asymptotic building blocks evaluated directly: an
//! isolated stationary-phase term, the Airy term at a velocity extremum,
//! and the exchange pulse inside the wedge.

use kgzones::asymptotics::{airy_argument, airy_term, j_parameters, j_term, sp_term};
use kgzones::saddle::find_saddles;
use kgzones::{Result, Waveguide, WaveguideParams};

fn main() -> Result<()> {
    let wg = Waveguide::preset();
    let t = 400.0;

    let v = 1.0;
    for s in find_saddles(v, &wg)? {
        let h = sp_term(&s, t, v * t, &wg)?;
        println!(
            "SP #{} at V={v}: u1 part {:.4e}, u2 part {:.4e}",
            s.index, h[0], h[1]
        );
    }

    let ext = wg.structure.extrema.expect("coupled preset has extrema");
    for e in [ext.max, ext.min] {
        let v = e.velocity;
        let z = airy_argument(&e, t, v * t);
        let a = airy_term(&e, t, v * t, &wg)?;
        println!("Ai at the {:?} (V={v:.6}, z={z:.3}): {:.4e}", e.kind, a[0]);
    }

    // The exchange pulse is cleanest where the coupling is weak relative to
    // the branch dispersion.
    let wg = Waveguide::new(WaveguideParams::exchange_preset())?;
    let cp = wg.points;
    let x = 80.0 * 2.0 / (1.0 / cp.v1 + 1.0 / cp.v2);
    for t in [x / cp.v1 + 0.5, 80.0, x / cp.v2 - 0.5] {
        let jp = j_parameters(t, x, &wg)?;
        let j = j_term(t, x, &wg)?;
        println!(
            "J at t={t:.3}, x={x:.3}: b={:.4}, u=({:.4e}, {:.4e})",
            jp.b,
            2.0 * j[0].re,
            2.0 * j[1].re
        );
    }
    Ok(())
}
