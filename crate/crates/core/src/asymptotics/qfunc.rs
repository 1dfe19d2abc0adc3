//! The two-parameter contour integral
//! `Q(β, z) = ∫_Γ e^{i(√(1+τ²) + zτ + βτ²)} dτ / √(1+τ²)`.
//!
//! `√(1+τ²)` is cut along `[-i, i]` and behaves like `τ` at infinity. `Γ`
//! comes in from infinity along `arg τ = -3π/4` and leaves along
//! `arg τ = π/4`, the two directions in which `e^{iβτ²}` decays, passing
//! the cut on its left. It is split into a straight line that passes the
//! cut on the right, `τ = 2 + r e^{iπ/4}`, minus a counter-clockwise loop
//! around the cut. The loop part is finite for every `β`; the line part
//! needs `β > 0`.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::C64;
use crate::quadrature::{periodic_trapezoid, trapezoid_halving};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QControls {
    /// Stop once successive halvings differ by less than this (relative to
    /// `1 + |value|`).
    pub tol: f64,
    pub max_levels: u32,
}

impl Default for QControls {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_levels: 18,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QValue {
    /// Minus the counter-clockwise loop around the cut.
    pub cut_part: C64,
    /// The straight line to the right of the cut; absent for `β = 0`.
    pub line_part: Option<C64>,
    /// Last step-halving change of each part.
    pub cut_change: f64,
    pub line_change: Option<f64>,
}

impl QValue {
    pub fn total(&self) -> Option<C64> {
        self.line_part.map(|l| l + self.cut_part)
    }
}

/// `√(1+τ²)` on the sheet cut along `[-i, i]` with `√ ~ τ` at infinity.
pub fn sqrt_cut(tau: C64) -> C64 {
    if tau.norm() == 0.0 {
        return C64::new(1.0, 0.0);
    }
    tau * (1.0 + 1.0 / (tau * tau)).sqrt()
}

/// Counter-clockwise integral around the cut, parametrized by
/// `τ = i sin φ`, on which `√(1+τ²) = cos φ` and `dτ/√(1+τ²) = i dφ`.
pub fn cut_loop(beta: f64, z: f64, controls: QControls) -> Result<(C64, f64)> {
    periodic_trapezoid(
        |phi| {
            let (s, c) = phi.sin_cos();
            C64::i() * C64::new(-z * s, c - beta * s * s).exp()
        },
        -PI,
        2.0 * PI,
        controls.tol,
        controls.max_levels,
    )
}

fn line_integral(beta: f64, z: f64, controls: QControls) -> Result<(C64, f64)> {
    let dir = C64::from_polar(1.0, FRAC_PI_4);
    let origin = C64::new(2.0, 0.0);
    // |integrand| ≲ exp(-β r² + |1 + z| r/√2 + 2|β|·2r + 1); cut where it
    // drops below e^{-45}
    let lin = (1.0 + z).abs() / 2f64.sqrt() + 4.0 * beta + 1.0;
    let r_max = (lin + (lin * lin + 4.0 * beta * 46.0).sqrt()) / (2.0 * beta) + 1.0;
    let f = |r: f64| {
        let tau = origin + dir * r;
        let s = sqrt_cut(tau);
        (C64::i() * (s + tau * z + tau * tau * beta)).exp() / s * dir
    };
    let initial = (r_max * (1.0 + z.abs() + beta * r_max) * 2.0).ceil() as usize;
    trapezoid_halving(
        f,
        -r_max,
        r_max,
        initial.clamp(64, 1 << 16),
        controls.tol,
        controls.max_levels,
    )
}

pub fn q_function(beta: f64, z: f64, controls: QControls) -> Result<QValue> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::NonPositiveParameter {
            name: "beta",
            value: beta,
        });
    }
    let (loop_ccw, cut_change) = cut_loop(beta, z, controls)?;
    let (line_part, line_change) = if beta > 0.0 {
        let (v, c) = line_integral(beta, z, controls)?;
        (Some(v), Some(c))
    } else {
        (None, None)
    };
    Ok(QValue {
        cut_part: -loop_ccw,
        line_part,
        cut_change,
        line_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::special::bessel_j0;

    #[test]
    fn branch_of_the_root() {
        assert!((sqrt_cut(C64::new(1e-9, 0.0)) - 1.0).norm() < 1e-12);
        assert!((sqrt_cut(C64::new(-1e-9, 0.0)) + 1.0).norm() < 1e-12);
        let big = C64::new(3e3, -2e3);
        assert!((sqrt_cut(big) / big - 1.0).norm() < 1e-6);
        let t = C64::new(0.4, 1.3);
        let s = sqrt_cut(t);
        assert!((s * s - (1.0 + t * t)).norm() < 1e-14);
    }

    #[test]
    fn loop_reduces_to_bessel_at_zero_beta() {
        for &z in &[0.0, 0.3, 0.99, 1.5, 4.0, -2.0] {
            let q = q_function(0.0, z, QControls::default()).unwrap();
            assert!(q.line_part.is_none());
            let w: f64 = 1.0 - z * z;
            let bessel = if w >= 0.0 {
                bessel_j0(w.sqrt())
            } else {
                // J0(i y) = I0(y)
                (0..40)
                    .map(|m| ((-w).sqrt() / 2.0).powi(2 * m) / factorial(m).powi(2))
                    .sum()
            };
            let want = C64::new(0.0, -2.0 * PI * bessel);
            assert!(
                (q.cut_part - want).norm() < 1e-10 * (1.0 + want.norm()),
                "z={z}"
            );
        }
    }

    fn factorial(m: i32) -> f64 {
        (1..=m).map(f64::from).product()
    }

    #[test]
    fn halving_converges() {
        let tight = QControls {
            tol: 1e-13,
            max_levels: 20,
        };
        let q = q_function(0.3, 0.5, tight).unwrap();
        assert!(q.cut_change < 1e-8 && q.line_change.unwrap() < 1e-8);
        let loose = q_function(
            0.3,
            0.5,
            QControls {
                tol: 1e-9,
                max_levels: 20,
            },
        )
        .unwrap();
        assert!((q.total().unwrap() - loose.total().unwrap()).norm() < 1e-8);
    }

    #[test]
    fn line_is_independent_of_its_anchor() {
        // moving the line parallel to itself without crossing the cut
        // leaves the integral unchanged
        let (beta, z) = (0.5, -0.2);
        let q = q_function(beta, z, QControls::default()).unwrap();
        let dir = C64::from_polar(1.0, FRAC_PI_4);
        let (alt, _) = trapezoid_halving(
            |r| {
                let tau = C64::new(4.0, -1.0) + dir * r;
                let s = sqrt_cut(tau);
                (C64::i() * (s + tau * z + tau * tau * beta)).exp() / s * dir
            },
            -40.0,
            40.0,
            512,
            1e-13,
            16,
        )
        .unwrap();
        assert!((alt - q.line_part.unwrap()).norm() < 1e-9);
    }

    #[test]
    fn negative_beta_is_rejected() {
        assert!(q_function(-1.0, 0.0, QControls::default()).is_err());
    }
}
