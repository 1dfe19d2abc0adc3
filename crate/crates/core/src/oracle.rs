//! Reference evaluators: the modal integral by quadrature, the exact scalar
//! Klein-Gordon solution, the exchange-pulse contour integral, and
//! independent evaluations of `J0` and `Ai` used to check the production
//! special functions.
//!
//! The modal integral is `u = 2 Re ∫₀^∞ F(ω) dω` along `Im ω = ε`, where
//! `F = (i/2π) Σ_m h_m e^{i(k_m x - ωt)}` sums over the two roots with
//! `Im k > 0` (a symmetric function of them, so no mode labels are
//! involved). Up to `Re ω = W` the line is integrated adaptively. Beyond
//! `W` each mode behaves like `e^{iω(x/c_m - t)}`, so its tail is rotated
//! onto a vertical ray pointing down when `t > x/c_m` and up otherwise,
//! where it decays exponentially.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotics::special::{bessel_j0, AI0, AIP0};
use crate::asymptotics::terms::{j_parameters, j_prefactor, residue_amplitude, MODAL_PREFACTOR};
use crate::dispersion::{roots_k, upper_roots};
use crate::error::{Error, Result};
use crate::model::{WaveguideParams, C64};
use crate::quadrature::{integrate, periodic_trapezoid, Tolerance};
use crate::waveguide::Waveguide;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureControls {
    /// Height of the integration line; `None` picks `clamp(1/|t|, 1e-3, 0.05)`.
    pub epsilon: Option<f64>,
    /// Where the line part ends and the ray tails begin; `None` picks four
    /// times the largest structural frequency.
    pub omega_max: Option<f64>,
    /// Panel budget of the adaptive rule.
    pub max_refinement: usize,
    /// Relative tolerance.
    pub tol: f64,
    /// Absolute floor of the error target.
    pub abs_tol: f64,
}

impl Default for QuadratureControls {
    fn default() -> Self {
        Self {
            epsilon: None,
            omega_max: None,
            max_refinement: 400_000,
            tol: 1e-8,
            abs_tol: 1e-10,
        }
    }
}

impl QuadratureControls {
    pub fn epsilon_for(&self, t: f64) -> f64 {
        self.epsilon
            .unwrap_or_else(|| (1.0 / t.abs().max(1e-300)).clamp(1e-3, 0.05))
    }

    pub fn omega_max_for(&self, wg: &Waveguide) -> f64 {
        self.omega_max.unwrap_or_else(|| {
            let [_, hi] = wg.structure.cutoffs;
            let ex = wg
                .structure
                .exchange_points
                .iter()
                .map(|p| p.norm())
                .fold(0.0, f64::max);
            4.0 * wg.points.omega_sh.max(hi).max(ex).max(wg.params.omega2)
        })
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.tol,
            max_panels: self.max_refinement,
        }
    }
}

/// Field value from the modal integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModalField {
    /// Physical (real) components.
    pub u: [f64; 2],
    /// The right-half-plane integral before taking `2 Re`.
    pub half_line: [C64; 2],
    /// Sum of the quadrature error estimates.
    pub error_estimate: f64,
}

fn both_modes(omega: C64, t: f64, x: f64, params: &WaveguideParams) -> [C64; 2] {
    let mut out = [C64::new(0.0, 0.0); 2];
    for k in upper_roots(omega, params) {
        let h = residue_amplitude(omega, k, params);
        let e = MODAL_PREFACTOR * (C64::i() * (k * x - omega * t)).exp();
        out[0] += h[0] * e;
        out[1] += h[1] * e;
    }
    out
}

/// The root continuing mode `m` far out, where it is the one nearest `ω/c_m`.
fn mode_root(omega: C64, c: f64, params: &WaveguideParams) -> C64 {
    let guess = omega / c;
    roots_k(omega, params)
        .into_iter()
        .min_by(|a, b| (a - guess).norm().total_cmp(&(b - guess).norm()))
        .expect("four roots")
}

/// Integral of one mode from `start` to infinity parallel to the real axis
/// (towards `+∞` when `sense = 1`, `-∞` when `sense = -1`), evaluated on
/// the equivalent vertical ray.
fn ray_tail(
    start: C64,
    sense: f64,
    c: f64,
    t: f64,
    x: f64,
    params: &WaveguideParams,
    tol: Tolerance,
) -> Result<([C64; 2], f64)> {
    let lag = x / c - t;
    // e^{iω(x/c - t)} decays downward for lag < 0, upward for lag > 0
    let up = if lag >= 0.0 { 1.0 } else { -1.0 };
    // going towards +∞ and closing downward traverses the ray downward,
    // which is the clockwise sense and enters with the same orientation
    let dir = C64::new(0.0, up);
    let rate = lag.abs().max(1e-300);
    let length = (46.0 / rate).min(1e7 * (1.0 + start.norm()));
    let comp = |j: usize| {
        let f = move |s: f64| {
            let w = start + dir * s;
            let k = mode_root(w, c, params);
            let h = residue_amplitude(w, k, params);
            MODAL_PREFACTOR * h[j] * (C64::i() * (k * x - w * t)).exp() * dir
        };
        integrate(f, 0.0, length, 8, tol)
    };
    let (a, ea) = comp(0)?;
    let (b, eb) = comp(1)?;
    // ∫_start^{±∞} along the line = ∫ along the ray (arc at infinity vanishes)
    // for sense = +1; the mirrored case reverses orientation
    Ok(([a * sense, b * sense], ea + eb))
}

/// Line part of the modal integral over `[a, b] + iε` with both modes.
fn line_part(
    a: f64,
    b: f64,
    eps: f64,
    t: f64,
    x: f64,
    wg: &Waveguide,
    controls: &QuadratureControls,
) -> Result<([C64; 2], f64)> {
    let p = &wg.params;
    // panels sized to the fastest oscillation e^{i(x k' - t)ω}
    let slowness = 1.0 / p.c2 + 1.0;
    let rate = x * slowness + t.abs();
    let cycles = (b - a) * rate / (2.0 * PI);
    let initial = ((2.0 * cycles).ceil() as usize).clamp(16, controls.max_refinement / 4);
    let tol = controls.tolerance();
    let mut out = [C64::new(0.0, 0.0); 2];
    let mut err = 0.0;
    for (j, slot) in out.iter_mut().enumerate() {
        let f = |r: f64| both_modes(C64::new(r, eps), t, x, p)[j];
        let (v, e) = integrate(f, a, b, initial, tol).map_err(|e| match e {
            Error::NoConvergence { achieved, .. } => Error::NoConvergence {
                what: "modal line integral",
                achieved,
            },
            other => other,
        })?;
        *slot = v;
        err += e;
    }
    Ok((out, err))
}

/// `u(t, x)` by quadrature of the modal single integral. Requires `x > 0`.
pub fn field_modal_integral(
    t: f64,
    x: f64,
    wg: &Waveguide,
    controls: &QuadratureControls,
) -> Result<ModalField> {
    // negated so that NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(x > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "x",
            value: x,
        });
    }
    let p = &wg.params;
    let eps = controls.epsilon_for(t);
    let w = controls.omega_max_for(wg);
    let (mut half, mut err) = line_part(0.0, w, eps, t, x, wg, controls)?;
    for c in [p.c1, p.c2] {
        let (tail, e) = ray_tail(C64::new(w, eps), 1.0, c, t, x, p, controls.tolerance())?;
        half[0] += tail[0];
        half[1] += tail[1];
        err += e;
    }
    Ok(ModalField {
        u: [2.0 * half[0].re, 2.0 * half[1].re],
        half_line: half,
        error_estimate: 2.0 * err,
    })
}

/// The same integral over the whole line `Im ω = ε` without using the
/// mirror symmetry. Returns the complex result, whose imaginary part
/// should vanish.
pub fn field_modal_integral_full_line(
    t: f64,
    x: f64,
    wg: &Waveguide,
    controls: &QuadratureControls,
) -> Result<[C64; 2]> {
    let p = &wg.params;
    let eps = controls.epsilon_for(t);
    let w = controls.omega_max_for(wg);
    let (mut total, _) = line_part(-w, w, eps, t, x, wg, controls)?;
    for c in [p.c1, p.c2] {
        for (start, sense) in [(C64::new(w, eps), 1.0), (C64::new(-w, eps), -1.0)] {
            let (tail, _) = ray_tail(start, sense, c, t, x, p, controls.tolerance())?;
            total[0] += tail[0];
            total[1] += tail[1];
        }
    }
    Ok(total)
}

/// Causal solution of the scalar equation with speed `c` and cut-off `Ω`:
/// `-(2c)⁻¹ J0(Ω√(t² - x²/c²))` inside the cone, zero outside.
pub fn scalar_kg_exact(t: f64, x: f64, c: f64, omega: f64) -> f64 {
    if t <= 0.0 || t <= x.abs() / c {
        return 0.0;
    }
    -bessel_j0(omega * (t * t - x * x / (c * c)).sqrt()) / (2.0 * c)
}

/// Distance into the cone, `z = Ω√(t² - x²/c²)`; `None` outside it.
pub fn scalar_z(t: f64, x: f64, c: f64, omega: f64) -> Option<f64> {
    (t > 0.0 && t > x.abs() / c).then(|| omega * (t * t - x * x / (c * c)).sqrt())
}

/// Far-field form of the scalar solution, valid for `z > S`:
/// `-(2c√(2πz))⁻¹ (e^{i(z-π/4)} + e^{-i(z-π/4)})`.
pub fn scalar_kg_far(t: f64, x: f64, c: f64, omega: f64, s: f64) -> Result<f64> {
    let z = scalar_z(t, x, c, omega).unwrap_or(0.0);
    if z <= s {
        return Err(Error::OutsideFarZone { z, s });
    }
    let ph = C64::new(0.0, z - 0.25 * PI);
    let v = -(ph.exp() + (-ph).exp()) / (2.0 * c * (2.0 * PI * z).sqrt());
    Ok(v.re)
}

/// Exchange pulse from its contour-integral form: the loop around the cut
/// `[-i, i]` of `√(1+τ²)`, traversed counter-clockwise with `√ ~ τ` far
/// away, parametrized by `τ = i sin θ` with `θ ∈ [-π/2, 3π/2]`.
pub fn j_int_quadrature(
    t: f64,
    x: f64,
    wg: &Waveguide,
    controls: &QuadratureControls,
) -> Result<[C64; 2]> {
    let jp = j_parameters(t, x, wg)?;
    let (tt, beta) = (jp.stretched_time, jp.beta);
    // exp{-iτT + iβ√(1+τ²)} dτ/√(1+τ²) with √(1+τ²) = cos θ, dτ = i cos θ dθ
    let (loop_ccw, _) = periodic_trapezoid(
        |th| {
            let (s, c) = th.sin_cos();
            let tau = C64::new(0.0, s);
            let root = C64::new(c, 0.0);
            (C64::new(0.0, -1.0) * tau * tt + C64::i() * root * beta).exp() * C64::i()
        },
        -0.5 * PI,
        2.0 * PI,
        controls.tol.min(1e-12),
        24,
    )?;
    // The line integral over both modes equals the counter-clockwise loop;
    // with the local residue h = A/(8c1²c2²k_sh² m √(1+τ²)) and dω = m dτ/d
    // the contribution is (i/2π)·A e^{iθ}/(4c1²c2²k_sh²Δ)·∮.
    let pre = j_prefactor(t, x, wg);
    let scale = -MODAL_PREFACTOR * loop_ccw;
    Ok([pre[0] * scale, pre[1] * scale])
}

/// Independent evaluations of the special functions.
pub mod reference {
    use super::*;
    use crate::quadrature::integrate;

    /// `J0(z) = (2π)⁻¹ ∫₀^{2π} cos(z sin θ) dθ` by the trapezoid rule.
    pub fn j0_by_quadrature(z: f64) -> f64 {
        let (v, _) = periodic_trapezoid(
            |th| C64::new((z * th.sin()).cos(), 0.0),
            0.0,
            2.0 * PI,
            1e-15,
            12,
        )
        .expect("trapezoid converges for smooth periodic integrands");
        v.re / (2.0 * PI)
    }

    /// `Ai(z)` for `z ≥ 0` from the ray integral
    /// `π⁻¹ Im[e^{iπ/3} ∫₀^∞ exp(-r³/3 - z r e^{iπ/3}) dr]`.
    pub fn airy_by_contour(z: f64) -> f64 {
        assert!(z >= 0.0);
        let e = C64::from_polar(1.0, PI / 3.0);
        let tol = Tolerance {
            abs: 1e-17,
            rel: 1e-14,
            max_panels: 100_000,
        };
        let (v, _) = integrate(
            |r: f64| (C64::new(-r * r * r / 3.0, 0.0) - e * (z * r)).exp(),
            0.0,
            6.0,
            16,
            tol,
        )
        .expect("smooth integrand");
        (e * v).im / PI
    }

    /// `Ai` at each requested `z ≤ 0`, integrating `y'' = z y` from the
    /// values at the origin with classical fourth-order Runge-Kutta.
    pub fn airy_by_ode(zs: &[f64]) -> Vec<f64> {
        let h = 1e-4_f64;
        let mut order: Vec<usize> = (0..zs.len()).collect();
        order.sort_by(|&a, &b| zs[b].total_cmp(&zs[a]));
        let mut out = vec![0.0; zs.len()];
        let (mut z, mut y, mut dy) = (0.0_f64, AI0, -AIP0);
        let rhs = |z: f64, y: f64| z * y;
        for i in order {
            let target = zs[i];
            assert!(target <= 0.0);
            while z > target {
                let step = -(h.min(z - target));
                let k1y = dy;
                let k1v = rhs(z, y);
                let k2y = dy + 0.5 * step * k1v;
                let k2v = rhs(z + 0.5 * step, y + 0.5 * step * k1y);
                let k3y = dy + 0.5 * step * k2v;
                let k3v = rhs(z + 0.5 * step, y + 0.5 * step * k2y);
                let k4y = dy + step * k3v;
                let k4v = rhs(z + step, y + step * k3y);
                y += step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
                dy += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
                z += step;
            }
            out[i] = y;
        }
        out
    }

    /// `Ai(z)` from whichever of the two references covers `z`.
    pub fn airy_reference(zs: &[f64]) -> Vec<f64> {
        let neg: Vec<f64> = zs.iter().copied().filter(|z| *z < 0.0).collect();
        let neg_vals = airy_by_ode(&neg);
        let mut it = neg_vals.into_iter();
        zs.iter()
            .map(|&z| {
                if z < 0.0 {
                    it.next().unwrap()
                } else {
                    airy_by_contour(z)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::reference::*;
    use super::*;
    use crate::asymptotics::{airy_ai, j_term};

    #[test]
    fn scalar_solution_basics() {
        let (c, om) = (2.0, 3.0);
        assert_eq!(scalar_kg_exact(1.0, 5.0, c, om), 0.0);
        assert_eq!(scalar_kg_exact(-1.0, 0.5, c, om), 0.0);
        assert!((scalar_kg_exact(2.5 + 1e-12, 5.0, c, om) + 0.25).abs() < 1e-9);
        assert_eq!(scalar_kg_exact(4.0, 1.0, c, 0.0), -0.25);
        let z0 = 2.404_825_557_695_773;
        let t = (z0 / om).hypot(1.0 / c);
        assert!(scalar_kg_exact(t, 1.0, c, om).abs() < 1e-10);
    }

    #[test]
    fn far_field_accuracy_improves_with_z() {
        let (c, om, x) = (2.0_f64, 3.0_f64, 10.0_f64);
        // worst error over one period of the carrier, relative to the envelope
        let worst = |z0: f64| {
            (0..64)
                .map(|i| {
                    let z = z0 + 2.0 * PI * i as f64 / 64.0;
                    let t = ((z / om).powi(2) + (x / c).powi(2)).sqrt();
                    let exact = scalar_kg_exact(t, x, c, om);
                    let far = scalar_kg_far(t, x, c, om, 3.0).unwrap();
                    (far - exact).abs() * c * (2.0 * PI * z).sqrt()
                })
                .fold(0.0, f64::max)
        };
        let mut last = f64::INFINITY;
        for i in 0..30 {
            let z = 10.0 * 100f64.powf(i as f64 / 29.0);
            let err = worst(z);
            assert!(err < 0.02 && err < last, "z = {z}: {err}");
            last = err;
        }
        assert!(scalar_kg_far(3.0, 5.9, c, om, 3.0).is_err());
    }

    #[test]
    fn references_agree_with_production_functions() {
        for i in 0..=80 {
            let z = -20.0 + 0.5 * i as f64;
            assert!((j0_by_quadrature(z) - bessel_j0(z)).abs() < 1e-12, "J0 {z}");
        }
        let zs: Vec<f64> = (0..=80).map(|i| -20.0 + 0.5 * i as f64).collect();
        let refs = airy_reference(&zs);
        for (z, r) in zs.iter().zip(refs) {
            assert!(
                (r - airy_ai(*z)).abs() < 1e-10,
                "Ai {z}: {r} vs {}",
                airy_ai(*z)
            );
        }
    }

    #[test]
    fn exchange_pulse_two_ways() {
        let wg = Waveguide::preset();
        let x = 150.0;
        let (t1, t2) = (x / wg.points.v1, x / wg.points.v2);
        for i in 1..10 {
            let t = t1 + (t2 - t1) * i as f64 / 10.0;
            let a = j_term(t, x, &wg).unwrap()[1];
            let b = j_int_quadrature(t, x, &wg, &QuadratureControls::default()).unwrap()[1];
            assert!((a - b).norm() < 1e-10 * a.norm().max(1e-12), "{a} {b}");
        }
    }

    #[test]
    fn supersonic_and_acausal_points_are_silent() {
        let wg = Waveguide::preset();
        let c = QuadratureControls::default();
        for &(t, x) in &[(-5.0, 3.0), (10.0, 25.0), (30.0, 70.0)] {
            let f = field_modal_integral(t, x, &wg, &c).unwrap();
            assert!(
                f.u[0].abs() < 1e-7 && f.u[1].abs() < 1e-7,
                "{t} {x} {:?}",
                f.u
            );
        }
    }

    #[test]
    fn unperturbed_first_component_is_scalar() {
        let wg = Waveguide::new(WaveguideParams::preset().with_mu(0.0)).unwrap();
        let c = QuadratureControls::default();
        for &(t, x) in &[(10.0, 8.0), (25.0, 10.0), (40.0, 60.0)] {
            let f = field_modal_integral(t, x, &wg, &c).unwrap();
            let exact = scalar_kg_exact(t, x, wg.params.c1, wg.params.omega1);
            assert!(
                (f.u[0] - exact).abs() < 1e-6,
                "{t} {x}: {} vs {exact}",
                f.u[0]
            );
            assert!(f.u[1].abs() < 1e-8);
        }
    }
}
