//! Assembled asymptotic field against the modal-integral oracle along a
//! ray of fixed time. Each line shows the zone label and which source
//! produced the value.

use kgzones::field::assemble_field;
use kgzones::oracle::{field_modal_integral, QuadratureControls};
use kgzones::zones::DEFAULT_S;
use kgzones::{Result, Waveguide};

fn main() -> Result<()> {
    let wg = Waveguide::preset();
    let t = 200.0;
    let controls = QuadratureControls::default();
    println!(
        "{:>6} {:>10} {:>13} {:>13} {:>9}",
        "V", "label", "asymptotic", "oracle", "source"
    );
    for v in [0.8, 1.0, 1.2, 1.44273, 1.6, 1.8, 2.2] {
        let x = v * t;
        let f = assemble_field(t, x, &wg, DEFAULT_S)?;
        let o = field_modal_integral(t, x, &wg, &controls)?;
        println!(
            "{v:6.4} {:>10} {:13.5e} {:13.5e} {:>9?}",
            f.label.to_string(),
            f.u[0],
            o.u[0],
            f.provenance
        );
    }
    Ok(())
}
