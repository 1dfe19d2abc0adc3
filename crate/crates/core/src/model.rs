//! Physical parameters of the coupled two-layer waveguide, the dispersion
//! function `D(omega, k)`, the amplitude vector `A(omega, k)` and the
//! closed-form characteristic points of the unperturbed system.
//!
//! The governing system is
//!
//! ```text
//! [ diag(c1², c2²) ∂x² + [[-Ω1², μ], [μ, -Ω2²]] - ∂t² ] u = f δ(t) δ(x)
//! ```
//!
//! Transforming with `u = (2π)⁻² ∬ û exp(-iωt + ikx) dk dω` turns the
//! operator into the matrix `M(ω, k)` whose determinant is `D` and whose
//! adjugate applied to `f` is `A`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Constants of the matrix Klein-Gordon system plus the excitation vector.
///
/// Units are abstract; `omega1`, `omega2` are the cut-off frequencies of the
/// uncoupled layers and `mu` is the coupling (1/time²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveguideParams {
    pub c1: f64,
    pub c2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub mu: f64,
    #[serde(default = "default_f1")]
    pub f1: f64,
    #[serde(default)]
    pub f2: f64,
}

fn default_f1() -> f64 {
    1.0
}

impl Default for WaveguideParams {
    fn default() -> Self {
        Self::preset()
    }
}

impl WaveguideParams {
    /// The reference working example: `c1 = 2, c2 = 1.8, Ω1 = 3, Ω2 = 3.5,
    /// μ = 0.5`, excitation `(1, 0)`. Satisfies `v1 < c2`.
    pub fn preset() -> Self {
        Self {
            c1: 2.0,
            c2: 1.8,
            omega1: 3.0,
            omega2: 3.5,
            mu: 0.5,
            f1: 1.0,
            f2: 0.0,
        }
    }

    /// Same speeds and coupling as [`preset`](Self::preset) with cut-offs
    /// `Ω1 = 10, Ω2 = 13`. The coupling is weak relative to the dispersion of
    /// the unperturbed branches, so near the middle of the exchange wedge the
    /// pair (ω★1, ω★3) merges long before ω★2 and ω★4 join in, and the
    /// diagram has clean J and Q zones.
    pub fn exchange_preset() -> Self {
        Self {
            omega1: 10.0,
            omega2: 13.0,
            ..Self::preset()
        }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// `(ω² - c_j² k² - Ω_j²)` for layer `j ∈ {1, 2}`.
    #[inline]
    pub(crate) fn layer_factor(&self, layer: usize, omega: C64, k: C64) -> C64 {
        let (c, w) = self.layer(layer);
        omega * omega - k * k * (c * c) - w * w
    }

    #[inline]
    pub(crate) fn layer(&self, layer: usize) -> (f64, f64) {
        match layer {
            1 => (self.c1, self.omega1),
            2 => (self.c2, self.omega2),
            _ => panic!("layer index must be 1 or 2, got {layer}"),
        }
    }
}

/// Which side of `c2` the unperturbed group velocity `v1` falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExchangeRegime {
    /// `v1 < c2`, the case the zone logic is built around.
    SlowExchange,
    /// `v1 == c2` to within 1e-12 relative.
    Critical,
    /// `v1 > c2`.
    FastExchange,
}

impl ExchangeRegime {
    pub fn is_fully_supported(self) -> bool {
        self == ExchangeRegime::SlowExchange
    }
}

/// Shestopalov point and unperturbed group velocities at it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicPoints {
    pub omega_sh: f64,
    pub k_sh: f64,
    pub v1: f64,
    pub v2: f64,
}

/// Parameters that passed [`validate`], together with derived flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams {
    pub params: WaveguideParams,
    pub points: CharacteristicPoints,
    pub regime: ExchangeRegime,
}

impl ValidatedParams {
    /// Turns the warning-level regime flag into a hard error.
    pub fn require_supported(self) -> Result<Self> {
        if self.regime.is_fully_supported() {
            Ok(self)
        } else {
            Err(Error::UnsupportedRegime {
                v1: self.points.v1,
                c2: self.params.c2,
            })
        }
    }
}

pub fn validate(params: WaveguideParams) -> Result<ValidatedParams> {
    let p = params;
    for (name, value) in [
        ("c1", p.c1),
        ("c2", p.c2),
        ("omega1", p.omega1),
        ("omega2", p.omega2),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveParameter { name, value });
        }
    }
    if !(p.mu.is_finite() && p.mu >= 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "mu",
            value: p.mu,
        });
    }
    for (name, value) in [("f1", p.f1), ("f2", p.f2)] {
        if !value.is_finite() {
            return Err(Error::NonPositiveParameter { name, value });
        }
    }
    if p.c1 <= p.c2 {
        return Err(Error::OrderingViolation(format!(
            "c1 = {} must exceed c2 = {}",
            p.c1, p.c2
        )));
    }
    if p.omega1 >= p.omega2 {
        return Err(Error::OrderingViolation(format!(
            "omega1 = {} must be below omega2 = {}",
            p.omega1, p.omega2
        )));
    }
    let limit = p.omega1 * p.omega2;
    if p.mu >= limit {
        return Err(Error::OverstrongCoupling { mu: p.mu, limit });
    }
    let points = shestopalov(&p)?;
    let rel = (points.v1 - p.c2) / p.c2;
    let regime = if rel.abs() <= 1e-12 {
        ExchangeRegime::Critical
    } else if rel < 0.0 {
        ExchangeRegime::SlowExchange
    } else {
        ExchangeRegime::FastExchange
    };
    Ok(ValidatedParams {
        params: p,
        points,
        regime,
    })
}

/// `D(ω, k) = (ω² - c1²k² - Ω1²)(ω² - c2²k² - Ω2²) - μ²`.
pub fn dispersion_d(omega: C64, k: C64, params: &WaveguideParams) -> C64 {
    params.layer_factor(1, omega, k) * params.layer_factor(2, omega, k) - params.mu * params.mu
}

/// Adjugate of the symbol matrix applied to the excitation vector.
///
/// For the default excitation `(1, 0)` this is `(ω² - c2²k² - Ω2², -μ)`.
pub fn amplitude_a(omega: C64, k: C64, params: &WaveguideParams) -> [C64; 2] {
    let p1 = params.layer_factor(1, omega, k);
    let p2 = params.layer_factor(2, omega, k);
    let mu = params.mu;
    [
        p2 * params.f1 - mu * params.f2,
        p1 * params.f2 - mu * params.f1,
    ]
}

pub fn shestopalov(params: &WaveguideParams) -> Result<CharacteristicPoints> {
    let WaveguideParams {
        c1,
        c2,
        omega1,
        omega2,
        ..
    } = *params;
    let dc = c1 * c1 - c2 * c2;
    if dc == 0.0 {
        return Err(Error::DegenerateSpeeds);
    }
    let omega_sh = ((c1 * c1 * omega2 * omega2 - c2 * c2 * omega1 * omega1) / dc).sqrt();
    let k_sh = ((omega2 * omega2 - omega1 * omega1) / dc).sqrt();
    let v1 = c1 * (omega_sh * omega_sh - omega1 * omega1).sqrt() / omega_sh;
    let v2 = c2 * (omega_sh * omega_sh - omega2 * omega2).sqrt() / omega_sh;
    Ok(CharacteristicPoints {
        omega_sh,
        k_sh,
        v1,
        v2,
    })
}

/// Mixed partial derivatives of `D` up to total order three.
///
/// `d[a][b]` holds `∂ω^a ∂k^b D`.
#[derive(Debug, Clone, Copy)]
pub struct DispersionPartials {
    pub d: [[C64; 4]; 4],
}

impl DispersionPartials {
    pub fn at(omega: C64, k: C64, params: &WaveguideParams) -> Self {
        // Each layer factor is quadratic in ω and in k with no mixed term.
        let layer = |j: usize| -> [[C64; 3]; 3] {
            let (c, _) = params.layer(j);
            let zero = C64::new(0.0, 0.0);
            let mut p = [[zero; 3]; 3];
            p[0][0] = params.layer_factor(j, omega, k);
            p[1][0] = 2.0 * omega;
            p[2][0] = C64::new(2.0, 0.0);
            p[0][1] = -2.0 * c * c * k;
            p[0][2] = C64::new(-2.0 * c * c, 0.0);
            p
        };
        let p1 = layer(1);
        let p2 = layer(2);
        let binom = |n: usize, r: usize| -> f64 {
            [
                [1.0, 0.0, 0.0, 0.0],
                [1.0, 1.0, 0.0, 0.0],
                [1.0, 2.0, 1.0, 0.0],
                [1.0, 3.0, 3.0, 1.0],
            ][n][r]
        };
        let mut d = [[C64::new(0.0, 0.0); 4]; 4];
        #[allow(clippy::needless_range_loop)]
        for a in 0..4 {
            for b in 0..4 - a {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..=a.min(2) {
                    for j in 0..=b.min(2) {
                        let (ai, bj) = (a - i, b - j);
                        if ai > 2 || bj > 2 {
                            continue;
                        }
                        acc += binom(a, i) * binom(b, j) * p1[i][j] * p2[ai][bj];
                    }
                }
                d[a][b] = acc;
            }
        }
        d[0][0] -= params.mu * params.mu;
        Self { d }
    }

    #[inline]
    pub fn value(&self) -> C64 {
        self.d[0][0]
    }
    #[inline]
    pub fn d_omega(&self) -> C64 {
        self.d[1][0]
    }
    #[inline]
    pub fn d_k(&self) -> C64 {
        self.d[0][1]
    }
}

/// Derivatives `dk/dω`, `d²k/dω²`, `d³k/dω³` along the curve `D(ω, k(ω)) = 0`.
pub fn implicit_k_derivatives(p: &DispersionPartials) -> [C64; 3] {
    let d = &p.d;
    let dk = d[0][1];
    let k1 = -d[1][0] / dk;
    let k2 = -(d[2][0] + 2.0 * d[1][1] * k1 + d[0][2] * k1 * k1) / dk;
    let k3 = -(d[3][0]
        + 3.0 * d[2][1] * k1
        + 3.0 * d[1][2] * k1 * k1
        + d[0][3] * k1 * k1 * k1
        + 3.0 * (d[1][1] + d[0][2] * k1) * k2)
        / dk;
    [k1, k2, k3]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn preset_is_slow_exchange() {
        let v = validate(WaveguideParams::preset()).unwrap();
        assert_eq!(v.regime, ExchangeRegime::SlowExchange);
        assert!((v.points.v1 - 1.6189403).abs() < 1e-6);
        assert!(v.points.v1 < 1.8);
    }

    #[test]
    fn fast_exchange_is_flagged() {
        let p = WaveguideParams {
            c1: 2.0,
            c2: 1.0,
            omega1: 1.0,
            omega2: 2.0,
            mu: 0.1,
            f1: 1.0,
            f2: 0.0,
        };
        let v = validate(p).unwrap();
        assert_eq!(v.regime, ExchangeRegime::FastExchange);
        // v1 = 2 sqrt(4/3 - 1) / sqrt(4/3) = 1.7888...
        assert!((v.points.v1 - 1.788854381999832).abs() < 1e-12);
        assert!(matches!(
            v.require_supported(),
            Err(Error::UnsupportedRegime { .. })
        ));
    }

    #[test]
    fn ordering_and_sign_errors() {
        let bad = WaveguideParams {
            c1: 1.0,
            c2: 2.0,
            ..WaveguideParams::preset()
        };
        assert!(matches!(validate(bad), Err(Error::OrderingViolation(_))));
        let bad = WaveguideParams {
            omega1: 4.0,
            ..WaveguideParams::preset()
        };
        assert!(matches!(validate(bad), Err(Error::OrderingViolation(_))));
        let bad = WaveguideParams {
            c2: -1.0,
            ..WaveguideParams::preset()
        };
        assert!(matches!(
            validate(bad),
            Err(Error::NonPositiveParameter { name: "c2", .. })
        ));
        let bad = WaveguideParams::preset().with_mu(f64::NAN);
        assert!(matches!(
            validate(bad),
            Err(Error::NonPositiveParameter { name: "mu", .. })
        ));
        let bad = WaveguideParams::preset().with_mu(10.5);
        assert!(matches!(
            validate(bad),
            Err(Error::OverstrongCoupling { .. })
        ));
    }

    #[test]
    fn d_and_a_at_origin() {
        let p = WaveguideParams::preset();
        let d = dispersion_d(c(0.0), c(0.0), &p);
        assert_eq!(d, c(9.0 * 12.25 - 0.25));
        let a = amplitude_a(c(0.0), c(0.0), &p);
        assert_eq!(a, [c(-12.25), c(-0.5)]);
        let a = amplitude_a(c(3.5), c(0.0), &p);
        assert_eq!(a, [c(0.0), c(-0.5)]);
    }

    #[test]
    fn shestopalov_point_values() {
        let p = WaveguideParams::preset();
        let s = shestopalov(&p).unwrap();
        assert!((s.omega_sh - 5.1093).abs() < 1e-4);
        assert!((s.k_sh - 2.0679).abs() < 1e-4);
        assert!((s.v1 - 1.6190).abs() < 1e-4);
        assert!((s.v2 - 1.3113).abs() < 1e-4);
        assert!(s.omega_sh > p.omega2);
        assert!(s.v1 > s.v2 && s.v1 < p.c1 && s.v2 < p.c2);
        // both layer factors vanish
        for j in [1, 2] {
            let f = p.layer_factor(j, c(s.omega_sh), c(s.k_sh));
            assert!(f.norm() < 1e-12 * s.omega_sh * s.omega_sh);
        }
        let d = dispersion_d(c(s.omega_sh), c(s.k_sh), &p);
        assert!((d - c(-0.25)).norm() < 1e-12);
        let d0 = dispersion_d(c(s.omega_sh), c(s.k_sh), &p.with_mu(0.0));
        assert!(d0.norm() < 1e-12);
        let a = amplitude_a(c(s.omega_sh), c(s.k_sh), &p);
        assert!(a[0].norm() < 1e-12 && (a[1] - c(-0.5)).norm() == 0.0);
    }

    #[test]
    fn equal_cutoffs_put_the_crossing_at_k_zero() {
        let p = WaveguideParams {
            omega1: 3.0,
            omega2: 3.0,
            ..WaveguideParams::preset()
        };
        let s = shestopalov(&p).unwrap();
        assert_eq!(s.k_sh, 0.0);
        assert!((s.omega_sh - 3.0).abs() < 1e-15);
    }

    #[test]
    fn equal_speeds_are_degenerate() {
        let p = WaveguideParams {
            c2: 2.0,
            ..WaveguideParams::preset()
        };
        assert!(matches!(shestopalov(&p), Err(Error::DegenerateSpeeds)));
    }

    #[test]
    fn params_json_rejects_unknown_keys() {
        let ok = r#"{"c1":2,"c2":1.8,"omega1":3,"omega2":3.5,"mu":0.5}"#;
        let p = WaveguideParams::from_json(ok).unwrap();
        assert_eq!(p, WaveguideParams::preset());
        let bad = r#"{"c1":2,"c2":1.8,"omega1":3,"omega2":3.5,"mu":0.5,"gamma":1}"#;
        let err = WaveguideParams::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("gamma"), "{err}");
    }

    #[test]
    fn partials_match_finite_differences() {
        let p = WaveguideParams::preset();
        let (w, k) = (C64::new(4.3, 0.2), C64::new(1.7, -0.1));
        let jet = DispersionPartials::at(w, k, &p);
        let h = 1e-5;
        let dw = (dispersion_d(w + h, k, &p) - dispersion_d(w - h, k, &p)) / (2.0 * h);
        let dk = (dispersion_d(w, k + h, &p) - dispersion_d(w, k - h, &p)) / (2.0 * h);
        assert!((dw - jet.d_omega()).norm() < 1e-6 * dw.norm());
        assert!((dk - jet.d_k()).norm() < 1e-6 * dk.norm());
        let dwk_fd = (DispersionPartials::at(w, k + h, &p).d[1][0]
            - DispersionPartials::at(w, k - h, &p).d[1][0])
            / (2.0 * h);
        assert!((dwk_fd - jet.d[1][1]).norm() < 1e-6 * (1.0 + dwk_fd.norm()));
        let dkkk_fd = (DispersionPartials::at(w, k + h, &p).d[0][2]
            - DispersionPartials::at(w, k - h, &p).d[0][2])
            / (2.0 * h);
        assert!((dkkk_fd - jet.d[0][3]).norm() < 1e-6 * (1.0 + dkkk_fd.norm()));
    }
}
