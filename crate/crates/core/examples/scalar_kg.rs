//! The scalar Klein-Gordon limit: exact Bessel solution, its far-field
//! form and the zone each point falls into.

use kgzones::oracle::{scalar_kg_exact, scalar_kg_far, scalar_z};
use kgzones::zones::{scalar_zone_classify, DEFAULT_S};

fn main() {
    let (c, omega, t) = (2.0, 3.0, 10.0);
    println!(
        "{:>6} {:>8} {:>7} {:>13} {:>13}",
        "x", "z", "zone", "exact", "far field"
    );
    for x in [0.0, 5.0, 10.0, 15.0, 19.0, 19.9, 19.99, 21.0] {
        let zone = scalar_zone_classify(t, x, c, omega, DEFAULT_S);
        let z = scalar_z(t, x, c, omega).map_or("-".to_string(), |z| format!("{z:.4}"));
        let far = scalar_kg_far(t, x, c, omega, DEFAULT_S)
            .map_or("-".to_string(), |u| format!("{u:.6e}"));
        println!(
            "{x:6.2} {z:>8} {:>7} {:13.6e} {far:>13}",
            zone.name(),
            scalar_kg_exact(t, x, c, omega)
        );
    }
}
