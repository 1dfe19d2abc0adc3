//! Exchange pulse inside the wedge `x/v1 < t < x/v2`: the J-based closed
//! form next to the modal-integral oracle for both components.

use kgzones::field::assemble_field;
use kgzones::oracle::{field_modal_integral, QuadratureControls};
use kgzones::zones::DEFAULT_S;
use kgzones::{Result, Waveguide, WaveguideParams};

fn main() -> Result<()> {
    let wg = Waveguide::new(WaveguideParams::exchange_preset())?;
    let cp = wg.points;
    let t = 60.0;
    let (v_lo, v_hi) = (cp.v2, cp.v1);
    println!("wedge at t={t}: V in ({v_lo:.5}, {v_hi:.5})");
    for i in 1..6 {
        let v = v_lo + (v_hi - v_lo) * i as f64 / 6.0;
        let x = v * t;
        let f = assemble_field(t, x, &wg, DEFAULT_S)?;
        let o = field_modal_integral(t, x, &wg, &QuadratureControls::default())?;
        println!(
            "V={v:.5} {:>8}  u1 {:+.5e} vs {:+.5e}   u2 {:+.5e} vs {:+.5e}",
            f.label.to_string(),
            f.u[0],
            o.u[0],
            f.u[1],
            o.u[1]
        );
    }
    Ok(())
}
