//! Quadrature rules for complex-valued integrands of a real variable.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::C64;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7K15 panel: `(Kronrod estimate, |Kronrod - Gauss|)`.
pub fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kron * h, (kron - gauss).norm() * h.abs())
}

/// Stopping rule and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Upper bound on the number of panels kept at once.
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-10,
            max_panels: 200_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive G7K15 over `[a, b]`, started from `initial` equal
/// panels. Returns the value and the summed error estimate.
pub fn integrate<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    initial: usize,
    tol: Tolerance,
) -> Result<(C64, f64)> {
    let n = initial.max(1);
    let mut heap = BinaryHeap::with_capacity(2 * n);
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for i in 0..n {
        let pa = a + (b - a) * i as f64 / n as f64;
        let pb = a + (b - a) * (i + 1) as f64 / n as f64;
        let (value, e) = gk15(&f, pa, pb);
        total += value;
        err += e;
        heap.push(Panel {
            a: pa,
            b: pb,
            value,
            err: e,
        });
    }
    loop {
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok((total, err));
        }
        if heap.len() >= tol.max_panels {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                achieved: err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature (panel underflow)",
                achieved: err,
            });
        }
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            value: v2,
            err: e2,
        });
        // guard against drift from the running sums
        if heap.len() % 4096 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
}

/// Trapezoid rule over one period of a smooth periodic integrand, with the
/// number of nodes doubled until two successive levels agree to `tol`.
/// Returns the value and the last change.
pub fn periodic_trapezoid<F: Fn(f64) -> C64>(
    f: F,
    start: f64,
    period: f64,
    tol: f64,
    max_levels: u32,
) -> Result<(C64, f64)> {
    let mut n = 16usize;
    let mut sum: C64 = (0..n)
        .map(|i| f(start + period * i as f64 / n as f64))
        .sum();
    let mut value = sum * (period / n as f64);
    for _ in 0..max_levels {
        let odd: C64 = (0..n)
            .map(|i| f(start + period * (2 * i + 1) as f64 / (2 * n) as f64))
            .sum();
        sum += odd;
        n *= 2;
        let next = sum * (period / n as f64);
        let change = (next - value).norm();
        value = next;
        if change <= tol * (1.0 + value.norm()) {
            return Ok((value, change));
        }
    }
    let achieved = {
        let half = (0..n / 2)
            .map(|i| f(start + period * (2 * i) as f64 / n as f64))
            .sum::<C64>()
            * (2.0 * period / n as f64);
        (value - half).norm()
    };
    Err(Error::NoConvergence {
        what: "periodic trapezoid",
        achieved,
    })
}

/// Composite trapezoid rule on `[a, b]` with the node count doubled until
/// two successive levels agree to `tol` (relative to `1 + |value|`). Meant
/// for analytic integrands that are negligible at both ends, where the rule
/// converges geometrically. Returns the value and the last change.
pub fn trapezoid_halving<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    initial: usize,
    tol: f64,
    max_levels: u32,
) -> Result<(C64, f64)> {
    let mut n = initial.max(2);
    let h0 = b - a;
    let mut sum: C64 =
        (f(a) + f(b)) * 0.5 + (1..n).map(|i| f(a + h0 * i as f64 / n as f64)).sum::<C64>();
    let mut value = sum * (h0 / n as f64);
    let mut change = f64::INFINITY;
    for _ in 0..max_levels {
        let odd: C64 = (0..n)
            .map(|i| f(a + h0 * (2 * i + 1) as f64 / (2 * n) as f64))
            .sum();
        sum += odd;
        n *= 2;
        let next = sum * (h0 / n as f64);
        change = (next - value).norm();
        value = next;
        if change <= tol * (1.0 + value.norm()) {
            return Ok((value, change));
        }
    }
    Err(Error::NoConvergence {
        what: "trapezoid step halving",
        achieved: change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let (v, _) = gk15(&|x: f64| C64::new(x.powi(20), x.powi(3)), -1.0, 1.0);
        assert!((v.re - 2.0 / 21.0).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn oscillatory_exponential() {
        let k = 200.0;
        let (v, _) = integrate(
            |x| C64::new(0.0, k * x).exp(),
            0.0,
            1.0,
            8,
            Tolerance::default(),
        )
        .unwrap();
        let exact = (C64::new(0.0, k).exp() - 1.0) / C64::new(0.0, k);
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let tol = Tolerance {
            abs: 1e-10,
            rel: 1e-10,
            ..Default::default()
        };
        let (v, _) = integrate(|x| C64::new(1.0 / x.sqrt(), 0.0), 0.0, 1.0, 1, tol).unwrap();
        assert!((v.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_panels: 8,
        };
        let r = integrate(|x| C64::new((1.0 / x).sin(), 0.0), 1e-6, 1.0, 1, tol);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn trapezoid_on_a_gaussian() {
        let (v, _) =
            trapezoid_halving(|x| C64::new((-x * x).exp(), 0.0), -9.0, 9.0, 8, 1e-14, 12).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_is_spectral_on_periodic_functions() {
        // ∫ e^{cos θ} dθ over one period = 2π I0(1)
        let (v, _) = periodic_trapezoid(
            |t| C64::new(t.cos().exp(), 0.0),
            -std::f64::consts::PI,
            2.0 * std::f64::consts::PI,
            1e-14,
            10,
        )
        .unwrap();
        let i0_1 = 1.266_065_877_752_008_4;
        assert!((v.re - 2.0 * std::f64::consts::PI * i0_1).abs() < 1e-13);
    }
}
