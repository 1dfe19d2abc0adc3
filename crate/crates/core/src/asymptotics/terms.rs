//! Individual asymptotic terms.
//!
//! Every evaluator returns the contribution of the right half of the
//! frequency axis to both field components; the physical field is twice the
//! real part of the sum (the left half is the complex-conjugate mirror).
//! All terms carry the factor `i/2π` that the modal integral acquires from
//! the `(2π)⁻²` transform convention and the residue in `k`.

use std::f64::consts::PI;

use serde::Serialize;

use super::special::{airy_ai, bessel_j0};
use crate::dispersion::{Extremum, ExtremumKind};
use crate::error::{Error, Result};
use crate::model::{amplitude_a, DispersionPartials, WaveguideParams, C64};
use crate::saddle::SaddlePoint;
use crate::waveguide::Waveguide;

/// `i/2π`: transform normalization times the `2πi` of the `k` residue.
pub const MODAL_PREFACTOR: C64 = C64::new(0.0, 1.0 / (2.0 * PI));

/// Which asymptotic family a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TermKind {
    SP,
    SPe,
    Ai,
    J,
    Q,
    B,
}

impl TermKind {
    pub fn letter(self) -> &'static str {
        match self {
            TermKind::SP => "SP",
            TermKind::SPe => "SPe",
            TermKind::Ai => "Ai",
            TermKind::J => "J",
            TermKind::Q => "Q",
            TermKind::B => "B",
        }
    }
}

/// One active term at a point: its family, the saddles behind it, and its
/// right-half-plane value per component (`None` for Q and B, which have no
/// closed form and defer to the modal integral).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermDescriptor {
    pub kind: TermKind,
    pub saddles: Vec<u8>,
    pub value: Option<[C64; 2]>,
    /// The overlapping pairs that produced this term, as `(m, n)`.
    pub triggered_by: Vec<(u8, u8)>,
}

/// `h_j = A_j / ∂kD` at a point of the dispersion surface.
pub fn residue_amplitude(omega: C64, k: C64, params: &WaveguideParams) -> [C64; 2] {
    let a = amplitude_a(omega, k, params);
    let dk = DispersionPartials::at(omega, k, params).d_k();
    [a[0] / dk, a[1] / dk]
}

const CURVATURE_TOL: f64 = 1e-10;

/// Isolated saddle (real or complex):
/// `(i/2π) h_j √(2πi/(xα)) e^{i(k★x - ω★t)}`.
///
/// For real `α` the principal root reproduces the usual `e^{±iπ/4}` phase;
/// for a complex saddle it continues that formula analytically.
pub fn sp_term(sp: &SaddlePoint, t: f64, x: f64, wg: &Waveguide) -> Result<[C64; 2]> {
    if sp.alpha.norm() < CURVATURE_TOL {
        return Err(Error::DegenerateCurvature {
            alpha: sp.alpha.norm(),
        });
    }
    let h = residue_amplitude(sp.omega_star, sp.k_star, &wg.params);
    let spread = (C64::new(0.0, 2.0 * PI) / (sp.alpha * x)).sqrt();
    let carrier = (C64::i() * sp.phase(t, x)).exp();
    let common = MODAL_PREFACTOR * spread * carrier;
    Ok([h[0] * common, h[1] * common])
}

/// Argument of the Airy function for an extremum `v'` with cubic
/// coefficient `α = -½ k'''`: `x^{2/3} (1/V - 1/v') / ∛α`.
pub fn airy_argument(e: &Extremum, t: f64, x: f64) -> f64 {
    let v = x / t;
    x.powf(2.0 / 3.0) * (1.0 / v - 1.0 / e.velocity) / e.alpha.cbrt()
}

/// Two saddles merging at a group-velocity extremum:
/// `(i/2π) h_j(ωe) 2π |xα|^{-1/3} Ai(z) e^{i(k_e x - ωe t)}`.
///
/// Positive `z` is the side where the pair has left the real axis. The
/// extremum's kind must agree with the sign of its cubic coefficient
/// (`α > 0` at a minimum, `α < 0` at a maximum).
pub fn airy_term(e: &Extremum, t: f64, x: f64, wg: &Waveguide) -> Result<[C64; 2]> {
    let consistent = match e.kind {
        ExtremumKind::Minimum => e.alpha > 0.0,
        ExtremumKind::Maximum => e.alpha < 0.0,
    };
    if !consistent {
        return Err(Error::WrongSignCurvature { alpha: e.alpha });
    }
    let w = C64::new(e.omega, 0.0);
    let k = C64::new(e.k, 0.0);
    let h = residue_amplitude(w, k, &wg.params);
    let z = airy_argument(e, t, x);
    let scale = 2.0 * PI / (x * e.alpha.abs()).cbrt() * airy_ai(z);
    let carrier = (C64::i() * (k * x - w * t)).exp();
    let common = MODAL_PREFACTOR * carrier * scale;
    Ok([h[0] * common, h[1] * common])
}

/// Local quantities of the exchange-pulse model at `(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JParameters {
    /// Stretch `ξ` of the frequency offset, `τ = ξ(ω - ω_sh)`.
    pub xi: f64,
    /// Coefficient of `√(1+τ²)` in the stretched phase, `xμ/(2c1c2k_sh)`.
    pub beta: f64,
    /// Coefficient of `-iτ` in the stretched phase, `(t - x(v1⁻¹+v2⁻¹)/2)/ξ`.
    pub stretched_time: f64,
    /// Bessel argument; zero on the wedge edges.
    pub b: f64,
}

/// Exchange-wedge parameters; errors outside `x/v1 < t < x/v2`.
pub fn j_parameters(t: f64, x: f64, wg: &Waveguide) -> Result<JParameters> {
    let p = &wg.params;
    let cp = &wg.points;
    if p.mu <= 0.0 || !(t >= x / cp.v1 && t <= x / cp.v2) {
        return Err(Error::OutsideWedge { t, x });
    }
    let delta = 1.0 / cp.v2 - 1.0 / cp.v1;
    let xi = p.c1 * p.c2 * cp.k_sh * delta / p.mu;
    let beta = x * p.mu / (2.0 * p.c1 * p.c2 * cp.k_sh);
    let s = 0.5 * (1.0 / cp.v1 + 1.0 / cp.v2);
    let stretched_time = (t - s * x) / xi;
    let inside = ((t - x / cp.v1) * (x / cp.v2 - t)).max(0.0);
    let b = p.mu * inside.sqrt() / (p.c1 * p.c2 * cp.k_sh * delta);
    Ok(JParameters {
        xi,
        beta,
        stretched_time,
        b,
    })
}

/// Common factor `-A_j(ω_sh, k_sh) e^{i(k_sh x - ω_sh t)} / (4c1²c2²k_sh²(v2⁻¹ - v1⁻¹))`
/// multiplying `J0(b)` in the exchange pulse.
pub(crate) fn j_prefactor(t: f64, x: f64, wg: &Waveguide) -> [C64; 2] {
    let p = &wg.params;
    let cp = &wg.points;
    let w = C64::new(cp.omega_sh, 0.0);
    let k = C64::new(cp.k_sh, 0.0);
    let a = amplitude_a(w, k, p);
    let delta = 1.0 / cp.v2 - 1.0 / cp.v1;
    let denom = 4.0 * (p.c1 * p.c2 * cp.k_sh).powi(2) * delta;
    let carrier = (C64::i() * (k * x - w * t)).exp();
    [-a[0] * carrier / denom, -a[1] * carrier / denom]
}

/// Exchange pulse inside the wedge between the two unperturbed fronts.
pub fn j_term(t: f64, x: f64, wg: &Waveguide) -> Result<[C64; 2]> {
    let jp = j_parameters(t, x, wg)?;
    let pre = j_prefactor(t, x, wg);
    let j0 = bessel_j0(jp.b);
    Ok([pre[0] * j0, pre[1] * j0])
}

/// Which of the two local sheets near the crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalSheet {
    /// The `-` root, continuing branch 1 below the crossing.
    Lower,
    /// The `+` root.
    Upper,
}

/// Hyperbolic model of the two branches near the crossing:
/// `k_sh + sω' ± √(d²ω'² + μ²/(4c1²c2²k_sh²))` with `s, d` the half sum and
/// half difference of the inverse unperturbed velocities.
pub fn k_near_shestopalov(omega: C64, wg: &Waveguide, sheet: LocalSheet) -> C64 {
    let p = &wg.params;
    let cp = &wg.points;
    let wp = omega - cp.omega_sh;
    let s = 0.5 * (1.0 / cp.v1 + 1.0 / cp.v2);
    let d = 0.5 * (1.0 / cp.v2 - 1.0 / cp.v1);
    let m = p.mu / (2.0 * p.c1 * p.c2 * cp.k_sh);
    let root = (wp * wp * (d * d) + m * m).sqrt();
    let sign = match sheet {
        LocalSheet::Lower => -1.0,
        LocalSheet::Upper => 1.0,
    };
    wp * s + cp.k_sh + root * sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{branch_k, Branch};
    use crate::saddle::find_real_saddles;

    #[test]
    fn sp_amplitude_decays_as_inverse_root_x() {
        let wg = Waveguide::preset();
        let v = 1.0;
        for sp in find_real_saddles(v, &wg).unwrap() {
            let a = sp_term(&sp, 100.0, 100.0 * v, &wg).unwrap();
            let b = sp_term(&sp, 400.0, 400.0 * v, &wg).unwrap();
            assert!((b[0].norm() / a[0].norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn sp_phase_is_exact() {
        let wg = Waveguide::preset();
        let (t, v) = (50.0, 1.2);
        let x = v * t;
        for sp in find_real_saddles(v, &wg).unwrap() {
            let term = sp_term(&sp, t, x, &wg).unwrap()[0];
            let h = residue_amplitude(sp.omega_star, sp.k_star, &wg.params)[0];
            let rest = term / (MODAL_PREFACTOR * h * (C64::i() * sp.phase(t, x)).exp());
            let quarter = std::f64::consts::FRAC_PI_4 * sp.alpha.re.signum();
            assert!((rest.arg() - quarter).abs() < 1e-12);
        }
    }

    #[test]
    fn unperturbed_sp_term_is_the_scalar_far_field() {
        let wg = Waveguide::new(WaveguideParams::preset().with_mu(0.0)).unwrap();
        let (c, om) = (wg.params.c1, wg.params.omega1);
        for &(t, x) in &[(40.0, 20.0), (100.0, 150.0), (300.0, 100.0)] {
            let sp = find_real_saddles(x / t, &wg)
                .unwrap()
                .into_iter()
                .find(|s| s.branch == Branch::One)
                .unwrap();
            let u = 2.0 * sp_term(&sp, t, x, &wg).unwrap()[0].re;
            let z = om * (t * t - x * x / (c * c)).sqrt();
            let far = -(z - std::f64::consts::FRAC_PI_4).cos() / (c * (2.0 * PI * z).sqrt());
            assert!((u - far).abs() < 1e-12 * far.abs().max(1e-3), "{u} {far}");
        }
    }

    #[test]
    fn airy_term_at_the_merge_point() {
        let wg = Waveguide::preset();
        let e = wg.structure.extrema.unwrap();
        let x = 300.0;
        let t = x / e.min.velocity;
        assert!(airy_argument(&e.min, t, x).abs() < 1e-12);
        let a = airy_term(&e.min, t, x, &wg).unwrap()[0].norm();
        let b = airy_term(&e.min, 8.0 * t, 8.0 * x, &wg).unwrap()[0].norm();
        assert!((a / b - 2.0).abs() < 1e-10);
        let mut wrong = e.min;
        wrong.kind = ExtremumKind::Maximum;
        assert!(matches!(
            airy_term(&wrong, t, x, &wg),
            Err(Error::WrongSignCurvature { .. })
        ));
    }

    #[test]
    fn airy_decays_on_the_complex_side_of_both_extrema() {
        let wg = Waveguide::preset();
        let e = wg.structure.extrema.unwrap();
        let x = 500.0;
        assert!(airy_argument(&e.max, x / (e.max.velocity * 1.01), x) > 0.0);
        assert!(airy_argument(&e.min, x / (e.min.velocity * 0.99), x) > 0.0);
    }

    #[test]
    fn exchange_pulse_shape() {
        let wg = Waveguide::preset();
        let x = 200.0;
        let edge = j_parameters(x / wg.points.v1, x, &wg).unwrap();
        assert_eq!(edge.b, 0.0);
        let mid_t = 0.5 * x * (1.0 / wg.points.v1 + 1.0 / wg.points.v2);
        let top = j_term(x / wg.points.v1, x, &wg).unwrap()[1].norm();
        for i in 1..50 {
            let t = x / wg.points.v1 + (mid_t - x / wg.points.v1) * i as f64 / 25.0;
            assert!(j_term(t, x, &wg).unwrap()[1].norm() <= top * (1.0 + 1e-12));
        }
        // with excitation (1, 0) the pulse lives in the second component
        let mid = j_term(mid_t, x, &wg).unwrap();
        assert!(mid[0].norm() < 1e-12 * mid[1].norm());
        assert!(matches!(
            j_term(0.5 * x, x, &wg),
            Err(Error::OutsideWedge { .. })
        ));
    }

    #[test]
    fn local_model_near_the_crossing() {
        let wg = Waveguide::preset();
        let cp = wg.points;
        let w0 = C64::new(cp.omega_sh, 0.0);
        let gap = k_near_shestopalov(w0, &wg, LocalSheet::Upper)
            - k_near_shestopalov(w0, &wg, LocalSheet::Lower);
        let p = &wg.params;
        assert!((gap.re - p.mu / (p.c1 * p.c2 * cp.k_sh)).abs() < 1e-14);
        let free = Waveguide::new(p.with_mu(0.0)).unwrap();
        let w = C64::new(cp.omega_sh + 0.3, 0.0);
        let up = k_near_shestopalov(w, &free, LocalSheet::Upper).re;
        assert!((up - (cp.k_sh + 0.3 / cp.v2)).abs() < 1e-12);
        // the modelled gap tracks the exact one
        let exact = (branch_k(Branch::Two, w0, p) - branch_k(Branch::One, w0, p)).re;
        assert!((gap.re / exact - 1.0).abs() < 0.01);
    }
}
