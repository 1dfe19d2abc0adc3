//! Assembly of the asymptotic field from the active terms of a zone.

use serde::Serialize;

use crate::asymptotics::terms::{airy_term, j_term, sp_term, TermDescriptor, TermKind};
use crate::error::{Error, Result};
use crate::model::C64;
use crate::oracle::{field_modal_integral, QuadratureControls};
use crate::waveguide::Waveguide;
use crate::zones::{classify, ZoneLabel};

/// Where a field value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Sum of closed-form terms.
    Asymptotic,
    /// Zones B and Q have no closed form; the modal integral is used.
    Oracle,
    /// Outside the fastest light cone the field vanishes identically.
    ExactZero,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldValue {
    pub t: f64,
    pub x: f64,
    pub u: [f64; 2],
    pub label: ZoneLabel,
    pub provenance: Provenance,
    /// Active terms with their right-half-plane values filled in.
    pub terms: Vec<TermDescriptor>,
    /// Largest `|Im|` of the mirror-symmetrised sum relative to its modulus.
    pub imaginary_residue: f64,
}

fn add(acc: &mut [C64; 2], v: [C64; 2]) {
    acc[0] += v[0];
    acc[1] += v[1];
}

/// Evaluates one descriptor; `None` for families without a closed form.
pub fn evaluate_term(
    d: &TermDescriptor,
    saddles: &[crate::saddle::SaddlePoint],
    t: f64,
    x: f64,
    wg: &Waveguide,
) -> Result<Option<[C64; 2]>> {
    match d.kind {
        TermKind::SP | TermKind::SPe => {
            let sp = saddles
                .iter()
                .find(|s| s.index == d.saddles[0])
                .ok_or_else(|| Error::Config(format!("saddle {} missing", d.saddles[0])))?;
            sp_term(sp, t, x, wg).map(Some)
        }
        TermKind::Ai => {
            let ex = wg.structure.extrema.ok_or(Error::ExtremumNotFound {
                lo: wg.structure.cutoffs[1],
                hi: f64::INFINITY,
            })?;
            let upper = d.saddles.iter().any(|&i| i == 2 || i == 5);
            let e = if upper { ex.max } else { ex.min };
            airy_term(&e, t, x, wg).map(Some)
        }
        TermKind::J => j_term(t, x, wg).map(Some),
        TermKind::Q | TermKind::B => Ok(None),
    }
}

/// Field at `(t, x)` from the zone's active terms, `u_j = 2 Re Σ`.
/// Zones without closed-form terms (B, Q) return the modal integral
/// computed with `controls`.
pub fn assemble_field_with(
    t: f64,
    x: f64,
    wg: &Waveguide,
    s: f64,
    controls: &QuadratureControls,
) -> Result<FieldValue> {
    if !(t > 0.0 && x > 0.0) {
        return Err(Error::Config(format!(
            "field assembly needs t > 0 and x > 0 (got {t}, {x})"
        )));
    }
    let v = x / t;
    if v >= wg.params.c1 {
        return Ok(FieldValue {
            t,
            x,
            u: [0.0; 2],
            label: ZoneLabel::zero(),
            provenance: Provenance::ExactZero,
            terms: Vec::new(),
            imaginary_residue: 0.0,
        });
    }
    let c = classify(t, v, wg, s)?;
    let mut terms = c.terms;
    let mut sum = [C64::new(0.0, 0.0); 2];
    let mut closed = true;
    for d in terms.iter_mut() {
        d.value = evaluate_term(d, &c.saddles, t, x, wg)?;
        match d.value {
            Some(val) => add(&mut sum, val),
            None => closed = false,
        }
    }
    if !closed {
        let m = field_modal_integral(t, x, wg, controls)?;
        return Ok(FieldValue {
            t,
            x,
            u: m.u,
            label: c.label,
            provenance: Provenance::Oracle,
            terms,
            imaginary_residue: 0.0,
        });
    }
    // right half plus its conjugate mirror
    let full = [sum[0] + sum[0].conj(), sum[1] + sum[1].conj()];
    let imaginary_residue = full
        .iter()
        .map(|z| {
            if z.norm() > 0.0 {
                z.im.abs() / z.norm()
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    Ok(FieldValue {
        t,
        x,
        u: [full[0].re, full[1].re],
        label: c.label,
        provenance: Provenance::Asymptotic,
        terms,
        imaginary_residue,
    })
}

/// [`assemble_field_with`] using default oracle controls.
pub fn assemble_field(t: f64, x: f64, wg: &Waveguide, s: f64) -> Result<FieldValue> {
    assemble_field_with(t, x, wg, s, &QuadratureControls::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WaveguideParams;
    use crate::oracle::scalar_kg_far;
    use crate::zones::DEFAULT_S;

    #[test]
    fn supersonic_is_exact_zero() {
        let wg = Waveguide::preset();
        let f = assemble_field(10.0, 25.0, &wg, DEFAULT_S).unwrap();
        assert_eq!(f.u, [0.0, 0.0]);
        assert_eq!(f.provenance, Provenance::ExactZero);
    }

    #[test]
    fn output_is_real() {
        let wg = Waveguide::preset();
        for &(t, v) in &[(200.0, 1.0), (300.0, 1.9), (400.0, 1.45)] {
            let f = assemble_field(t, v * t, &wg, DEFAULT_S).unwrap();
            assert!(f.imaginary_residue < 1e-10);
        }
    }

    #[test]
    fn uncoupled_far_field_is_the_scalar_limit() {
        let p = WaveguideParams::preset().with_mu(0.0);
        let wg = Waveguide::new(p).unwrap();
        for &(t, x) in &[(50.0, 20.0), (80.0, 100.0), (120.0, 60.0)] {
            let f = assemble_field(t, x, &wg, DEFAULT_S).unwrap();
            assert_eq!(f.provenance, Provenance::Asymptotic, "{}", f.label);
            let want = scalar_kg_far(t, x, p.c1, p.omega1, DEFAULT_S).unwrap();
            assert!(
                (f.u[0] - want).abs() < 1e-10 * want.abs().max(1e-3),
                "{} vs {want}",
                f.u[0]
            );
            assert!(f.u[1].abs() < 1e-12);
        }
    }

    #[test]
    fn exchange_zone_includes_the_pulse() {
        let wg = Waveguide::new(WaveguideParams::exchange_preset()).unwrap();
        let v = 0.5 * (wg.points.v1 + wg.points.v2);
        let f = assemble_field(60.0, v * 60.0, &wg, DEFAULT_S).unwrap();
        assert!(f
            .terms
            .iter()
            .any(|d| d.kind == TermKind::J && d.value.is_some()));
    }
}
