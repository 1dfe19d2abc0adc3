//! Bessel `J0` and Airy `Ai` for real arguments.

use std::f64::consts::{FRAC_PI_4, PI};

/// Below this modulus `J0` is summed from its power series.
const J0_SERIES_LIMIT: f64 = 12.0;

/// `Ai(0)` and `-Ai'(0)`.
pub const AI0: f64 = 0.355_028_053_887_817_2;
pub const AIP0: f64 = 0.258_819_403_792_806_8;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(z: f64) -> f64 {
    let x = z.abs();
    if x <= J0_SERIES_LIMIT {
        let q = -0.25 * x * x;
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut m = 1.0;
        while term.abs() > 1e-18 * sum.abs().max(1e-3) || m < 2.0 {
            term *= q / (m * m);
            sum += term;
            m += 1.0;
        }
        sum
    } else {
        let (p, q) = hankel_pq(x);
        let chi = x - FRAC_PI_4;
        (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// Asymptotic `P0`, `Q0` series truncated at the smallest term.
fn hankel_pq(x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k / x^k
    let mut last = f64::INFINITY;
    for k in 1usize..200 {
        let kf = k as f64;
        a *= (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if a >= last || a < 1e-17 {
            break;
        }
        last = a;
        // P = 1 - a2 + a4 - ..., Q = -a1 + a3 - ...
        let sign = if k.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    (p, q)
}

/// Largest `z` summed by the Maclaurin series on the decaying side.
const AI_SERIES_POS: f64 = 6.0;
/// Largest `|z|` summed by the Maclaurin series on the oscillatory side.
const AI_SERIES_NEG: f64 = 7.0;

/// Airy function of the first kind.
pub fn airy_ai(z: f64) -> f64 {
    if (-AI_SERIES_NEG..=AI_SERIES_POS).contains(&z) {
        airy_maclaurin(z)
    } else if z > 0.0 {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let s = airy_u_sum(zeta, true);
        (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25)) * s
    } else {
        let x = -z;
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let (p, q) = airy_pq(zeta);
        let th = zeta + FRAC_PI_4;
        (th.sin() * p - th.cos() * q) / (PI.sqrt() * x.powf(0.25))
    }
}

fn airy_maclaurin(z: f64) -> f64 {
    // f = Σ 3^k (1/3)_k z^{3k}/(3k)!,  g = Σ 3^k (2/3)_k z^{3k+1}/(3k+1)!
    let z3 = z * z * z;
    let mut tf = 1.0;
    let mut tg = z;
    let mut f = tf;
    let mut g = tg;
    let mut k = 1.0;
    loop {
        tf *= z3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= z3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1.0) {
            break;
        }
        k += 1.0;
    }
    AI0 * f - AIP0 * g
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn airy_u(k: usize) -> f64 {
    let mut u = 1.0;
    for j in 1..=k {
        let jf = j as f64;
        u *= (6.0 * jf - 5.0) * (6.0 * jf - 3.0) * (6.0 * jf - 1.0)
            / ((2.0 * jf - 1.0) * 216.0 * jf);
    }
    u
}

fn airy_u_sum(zeta: f64, alternating: bool) -> f64 {
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let term = airy_u(k) / zeta.powi(k as i32);
        if term >= last || term < 1e-17 {
            break;
        }
        last = term;
        sum += if alternating && k % 2 == 1 {
            -term
        } else {
            term
        };
    }
    sum
}

fn airy_pq(zeta: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let term = airy_u(k) / zeta.powi(k as i32);
        if term >= last || term < 1e-17 {
            break;
        }
        last = term;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values to 16 digits from an arbitrary-precision library.
    const J0_REF: [(f64, f64); 6] = [
        (1.0, 0.765_197_686_557_966_6),
        (5.5, -0.006_843_869_417_819_197),
        (11.9, 0.025_049_441_699_589_645),
        (12.1, 0.069_666_773_606_807_31),
        (19.0, 0.146_629_439_659_651_2),
        (35.0, -0.126_845_682_756_312_57),
    ];

    const AI_REF: [(f64, f64); 8] = [
        (1.0, 0.135_292_416_312_881_42),
        (-2.5, -0.112_325_067_692_966_09),
        (5.9, 1.274_709_450_918_447_6e-5),
        (6.1, 7.747_731_032_448_434e-6),
        (-6.9, 0.101_687_997_739_764_83),
        (-7.1, 0.254_036_328_561_978_15),
        (10.0, 1.104_753_255_289_868_6e-10),
        (-20.0, -0.176_406_127_077_984_7),
    ];

    #[test]
    fn j0_reference_values() {
        for (z, v) in J0_REF {
            assert!(
                (bessel_j0(z) - v).abs() < 1e-12,
                "J0({z}) = {}",
                bessel_j0(z)
            );
            assert_eq!(bessel_j0(-z), bessel_j0(z));
        }
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!(bessel_j0(2.404_825_557_695_77).abs() < 1e-10);
    }

    #[test]
    fn j0_is_continuous_across_the_seam() {
        let e = 1e-13;
        let jump = bessel_j0(J0_SERIES_LIMIT + e) - bessel_j0(J0_SERIES_LIMIT - e);
        assert!(jump.abs() < 1e-10);
        assert!((bessel_j0(J0_SERIES_LIMIT + e) - 0.047_689_310_796_833_54).abs() < 1e-11);
    }

    #[test]
    fn ai_reference_values() {
        for (z, v) in AI_REF {
            assert!(
                (airy_ai(z) - v).abs() < 1e-11,
                "Ai({z}) = {} vs {v}",
                airy_ai(z)
            );
        }
        assert!((airy_ai(0.0) - 0.355_028_053_887_817).abs() < 1e-15);
    }

    #[test]
    fn ai_decays_monotonically() {
        let mut last = airy_ai(1.0);
        for i in 1..200 {
            let v = airy_ai(1.0 + 0.1 * i as f64);
            assert!(v > 0.0 && v < last);
            last = v;
        }
    }

    #[test]
    fn ai_satisfies_its_equation() {
        let h = 1e-3;
        for i in 0..400 {
            let z = -20.0 + 0.1 * i as f64;
            let d2 = (airy_ai(z + h) - 2.0 * airy_ai(z) + airy_ai(z - h)) / (h * h);
            assert!((d2 - z * airy_ai(z)).abs() < 1e-5, "z = {z}");
        }
    }
}
