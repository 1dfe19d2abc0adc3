//! Saddle points of the phase `k(ω) - ω/V` as the observer velocity sweeps
//! from subsonic to supersonic. The count goes 2, 4, 2, 1, 0 from slow
//! to fast, with complex pairs appearing past each velocity extremum.

use kgzones::saddle::find_saddles;
use kgzones::{Result, Waveguide};

fn main() -> Result<()> {
    let wg = Waveguide::preset();
    for v in [1.0, 1.3, 1.45, 1.47, 1.55, 1.7, 1.95, 2.1] {
        let saddles = find_saddles(v, &wg)?;
        let real = saddles.iter().filter(|s| s.is_real).count();
        println!("V = {v:<5} {real} real, {} complex", saddles.len() - real);
        for s in &saddles {
            println!(
                "   #{} {:?}  ω★ = {:.6}{:+.6}i  k★ = {:.6}{:+.6}i  α = {:.4e}",
                s.index,
                s.branch,
                s.omega_star.re,
                s.omega_star.im,
                s.k_star.re,
                s.k_star.im,
                s.alpha.norm()
            );
        }
    }
    Ok(())
}
