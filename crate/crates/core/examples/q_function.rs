//! The Q integral that describes where the exchange pulse meets an Airy
//! transition, with its step-halving convergence and the β = 0 Bessel
//! identity.

use kgzones::asymptotics::{bessel_j0, q_function, QControls};
use kgzones::{Result, C64};

fn main() -> Result<()> {
    let controls = QControls::default();
    for (beta, z) in [(0.0, 0.3), (0.0, -0.7), (0.5, 0.2), (1.0, -1.0), (2.0, 0.5)] {
        let q = q_function(beta, z, controls)?;
        match q.total() {
            Some(v) => println!(
                "β={beta:<4} z={z:<5} Q = {:.10}{:+.10}i   (halving change {:.1e})",
                v.re,
                v.im,
                q.cut_change.max(q.line_change.unwrap_or(0.0))
            ),
            None => {
                let j =
                    C64::new(0.0, -2.0 * std::f64::consts::PI) * bessel_j0((1.0 - z * z).sqrt());
                println!(
                    "β=0    z={z:<5} cut part {:.12}{:+.12}i, -2πi J0(√(1-z²)) = {:.12}{:+.12}i",
                    q.cut_part.re, q.cut_part.im, j.re, j.im
                );
            }
        }
    }
    Ok(())
}
