//! Zone classification of the `(t, V)` plane.
//!
//! Two saddles interact when they are neighbours and their phases
//! `k★x - ω★t` differ by less than the threshold `S`. At fixed `V` every
//! phase is `x g(ω★)` with `x = Vt`, so each difference grows linearly in
//! `t` and each pair has a single boundary `t = S / (V |g_m - g_n|)` to the
//! left of which the pair overlaps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::terms::{TermDescriptor, TermKind};
use crate::error::{Error, Result};
use crate::oracle::scalar_z;
use crate::saddle::{find_saddles, SaddlePoint};
use crate::waveguide::Waveguide;

/// Default overlap threshold.
pub const DEFAULT_S: f64 = 3.0;

/// The kinds of interacting pairs that drive the decision tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairKind {
    /// (ω★1, ω★3), linked through the exchange region.
    Exchange,
    /// (ω★2, ω★3), or ω★5 with its mirror, near the group-velocity maximum.
    UpperAiry,
    /// (ω★3, ω★4), or ω★6 with its mirror, near the minimum.
    LowerAiry,
    /// A real saddle with its own negative-frequency image.
    NearField,
}

impl PairKind {
    pub const ALL: [PairKind; 4] = [
        PairKind::Exchange,
        PairKind::UpperAiry,
        PairKind::LowerAiry,
        PairKind::NearField,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairKind::Exchange => "1-3",
            PairKind::UpperAiry => "2-3",
            PairKind::LowerAiry => "3-4",
            PairKind::NearField => "mirror",
        }
    }
}

/// `|g_m - g_n|` for every interacting pair present at this `V`. The phase
/// difference at `(t, Vt)` is `V t` times this. For the near-field entry
/// the smallest `2|g|` over the real saddles is reported.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PairSeparations {
    pub entries: Vec<(PairKind, (u8, u8), f64)>,
}

impl PairSeparations {
    pub fn of(saddles: &[SaddlePoint], v: f64, wg: &Waveguide) -> Self {
        let by = |i: u8| saddles.iter().find(|s| s.index == i);
        let dist = |a: &SaddlePoint, b: &SaddlePoint| (a.g(v) - b.g(v)).norm();
        let mut entries = Vec::new();
        if let (Some(a), Some(b)) = (by(1), by(3)) {
            entries.push((PairKind::Exchange, (1, 3), dist(a, b)));
        }
        if let (Some(a), Some(b)) = (by(2), by(3)) {
            entries.push((PairKind::UpperAiry, (2, 3), dist(a, b)));
        } else if let Some(s) = by(5) {
            entries.push((PairKind::UpperAiry, (5, 5), 2.0 * s.g(v).im.abs()));
        } else if let Some(d) = cubic_separation(wg, v, true) {
            entries.push((PairKind::UpperAiry, (5, 5), d));
        }
        if let (Some(a), Some(b)) = (by(3), by(4)) {
            entries.push((PairKind::LowerAiry, (3, 4), dist(a, b)));
        } else if let Some(s) = by(6) {
            entries.push((PairKind::LowerAiry, (6, 6), 2.0 * s.g(v).im.abs()));
        } else if let Some(d) = cubic_separation(wg, v, false) {
            entries.push((PairKind::LowerAiry, (6, 6), d));
        }
        if let Some(s) = saddles
            .iter()
            .filter(|s| s.is_real)
            .min_by(|a, b| a.g(v).re.abs().total_cmp(&b.g(v).re.abs()))
        {
            entries.push((
                PairKind::NearField,
                (s.index, s.index),
                2.0 * s.g(v).re.abs(),
            ));
        }
        Self { entries }
    }

    pub fn get(&self, kind: PairKind) -> Option<((u8, u8), f64)> {
        self.entries
            .iter()
            .find(|e| e.0 == kind)
            .map(|e| (e.1, e.2))
    }

    /// Largest `t` at which the pair still overlaps for threshold `s`.
    pub fn boundary(&self, kind: PairKind, v: f64, s: f64) -> Option<f64> {
        self.get(kind)
            .map(|(_, d)| if d > 0.0 { s / (v * d) } else { f64::INFINITY })
    }
}

/// Separation per unit `x` of a merging pair from the cubic model around
/// the extremum, `(4/3)|s|^{3/2}/√|α|` with `s = 1/V - 1/v'`. Used when
/// neither the real pair nor its complex continuation was located (at the
/// extremum itself, where the pair is a double root), provided the model's
/// saddle offset `√|s/α|` stays inside the analytic strip.
fn cubic_separation(wg: &Waveguide, v: f64, upper: bool) -> Option<f64> {
    let ext = wg.structure.extrema?;
    let e = if upper { ext.max } else { ext.min };
    let at = (v - e.velocity).abs() <= 1e-9 * e.velocity;
    let beyond = at
        || if upper {
            v > e.velocity
        } else {
            v < e.velocity
        };
    if !beyond {
        return None;
    }
    let s = (1.0 / v - 1.0 / e.velocity).abs();
    let a = e.alpha.abs();
    ((s / a).sqrt() < wg.strip_height()).then(|| 4.0 / 3.0 * s.powf(1.5) / a.sqrt())
}

/// Letters active at a point, plus the number of isolated real saddles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ZoneLabel {
    /// Sorted, without `SP` (counted separately).
    pub letters: Vec<TermKind>,
    pub sp_count: u8,
}

impl ZoneLabel {
    pub fn zero() -> Self {
        Self {
            letters: Vec::new(),
            sp_count: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.letters.is_empty() && self.sp_count == 0
    }

    /// The letter that names the zone in a diagram: the first of
    /// B, Q, J, Ai present, otherwise SPe or SP.
    pub fn dominant(&self) -> Option<TermKind> {
        for k in [
            TermKind::B,
            TermKind::Q,
            TermKind::J,
            TermKind::Ai,
            TermKind::SPe,
        ] {
            if self.letters.contains(&k) {
                return Some(k);
            }
        }
        (self.sp_count > 0).then_some(TermKind::SP)
    }

    pub fn has(&self, k: TermKind) -> bool {
        if k == TermKind::SP {
            self.sp_count > 0
        } else {
            self.letters.contains(&k)
        }
    }
}

impl fmt::Display for ZoneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        for k in [TermKind::B, TermKind::Q, TermKind::J, TermKind::Ai] {
            if self.letters.contains(&k) {
                parts.push(k.letter().to_string());
            }
        }
        match self.sp_count {
            0 => {}
            1 => parts.push("SP".into()),
            n => parts.push(format!("{n}SP")),
        }
        if self.letters.contains(&TermKind::SPe) {
            parts.push("SPe".into());
        }
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for ZoneLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut label = Self::zero();
        for part in s.split('+') {
            let (count, letter) = match part.find(|c: char| !c.is_ascii_digit()) {
                Some(0) => (1u8, part),
                Some(i) => (
                    part[..i]
                        .parse()
                        .map_err(|_| Error::UnknownLabel(s.into()))?,
                    &part[i..],
                ),
                None => return Err(Error::UnknownLabel(s.into())),
            };
            match letter {
                "SP" => label.sp_count += count,
                "SPe" => label.letters.push(TermKind::SPe),
                "Ai" => label.letters.push(TermKind::Ai),
                "J" => label.letters.push(TermKind::J),
                "Q" => label.letters.push(TermKind::Q),
                "B" => label.letters.push(TermKind::B),
                _ => return Err(Error::UnknownLabel(s.into())),
            }
        }
        label.letters.sort();
        label.letters.dedup();
        Ok(label)
    }
}

/// Result of classifying one point.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub t: f64,
    pub v: f64,
    pub label: ZoneLabel,
    /// Term list without values; the field assembler fills them in.
    pub terms: Vec<TermDescriptor>,
    pub saddles: Vec<SaddlePoint>,
}

fn descriptor(kind: TermKind, saddles: Vec<u8>, triggered_by: Vec<(u8, u8)>) -> TermDescriptor {
    TermDescriptor {
        kind,
        saddles,
        value: None,
        triggered_by,
    }
}

/// Decision tree over the overlapping pairs at `(t, x = Vt)`.
pub fn classify_with(
    t: f64,
    v: f64,
    saddles: &[SaddlePoint],
    seps: &PairSeparations,
    s: f64,
) -> Classification {
    let x = v * t;
    let over = |k: PairKind| seps.get(k).filter(|(_, d)| x * d < s).map(|(p, _)| p);
    let ex = over(PairKind::Exchange);
    let hi = over(PairKind::UpperAiry);
    let lo = over(PairKind::LowerAiry);
    let near = over(PairKind::NearField);
    let has = |i: u8| saddles.iter().any(|p| p.index == i);
    let mut terms = Vec::new();
    let mut isolated: Vec<u8> = Vec::new();
    let all: Vec<u8> = saddles.iter().map(|p| p.index).collect();
    let trig: Vec<(u8, u8)> = [ex, hi, lo, near].into_iter().flatten().collect();

    let b_zone = near.is_some()
        || (ex.is_some() && hi.is_some() && lo.is_some())
        || (hi.is_some() && lo.is_some());
    if saddles.is_empty() {
        // nothing to classify: the field vanishes identically
    } else if b_zone {
        terms.push(descriptor(TermKind::B, all.clone(), trig));
    } else if ex.is_some() && (hi.is_some() || lo.is_some()) {
        let (group, other) = if hi.is_some() {
            (vec![1, 2, 3], 4)
        } else {
            (vec![1, 3, 4], 2)
        };
        terms.push(descriptor(TermKind::Q, group, trig));
        if has(other) {
            isolated.push(other);
        }
    } else if let Some(p) = ex {
        terms.push(descriptor(TermKind::J, vec![1, 3], vec![p]));
        isolated.extend([2, 4].into_iter().filter(|&i| has(i)));
    } else if let Some(p) = hi.or(lo) {
        // the merge absorbs its whole family, including a double root
        let family: [u8; 3] = if hi.is_some() { [2, 3, 5] } else { [3, 4, 6] };
        let pair: Vec<u8> = family.into_iter().filter(|&i| has(i)).collect();
        let pair = if pair.is_empty() { vec![p.0] } else { pair };
        terms.push(descriptor(TermKind::Ai, pair.clone(), vec![p]));
        isolated.extend(all.iter().copied().filter(|i| !pair.contains(i)));
    } else {
        isolated.extend(all.iter().copied());
    }

    let mut label = ZoneLabel::zero();
    for d in &terms {
        label.letters.push(d.kind);
    }
    for i in isolated {
        let sp = saddles
            .iter()
            .find(|p| p.index == i)
            .expect("index present");
        if sp.is_real {
            label.sp_count += 1;
            terms.push(descriptor(TermKind::SP, vec![i], Vec::new()));
        } else {
            label.letters.push(TermKind::SPe);
            terms.push(descriptor(TermKind::SPe, vec![i], Vec::new()));
        }
    }
    label.letters.sort();
    label.letters.dedup();
    Classification {
        t,
        v,
        label,
        terms,
        saddles: saddles.to_vec(),
    }
}

/// Zone and active terms at `(t, V)`. `V ≥ c1` gives the empty (zero-field)
/// label.
pub fn classify(t: f64, v: f64, wg: &Waveguide, s: f64) -> Result<Classification> {
    if !(t > 0.0 && v > 0.0 && s >= 0.0) {
        return Err(Error::Config(format!(
            "classify needs t > 0, V > 0, S >= 0 (got {t}, {v}, {s})"
        )));
    }
    let saddles = find_saddles(v, wg)?;
    let seps = PairSeparations::of(&saddles, v, wg);
    Ok(classify_with(t, v, &saddles, &seps, s))
}

/// A boundary curve `t = S/(V|Δg|)` sampled on the diagram rows.
#[derive(Debug, Clone, Serialize)]
pub struct Boundary {
    pub pair: PairKind,
    /// Polylines of `(t, V)` points; split where the pair ceases to exist
    /// or leaves the plotted `t` range.
    pub polylines: Vec<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZoneDiagram {
    pub s: f64,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    /// `labels[i][j]` belongs to `v[i]`, `t[j]`.
    pub labels: Vec<Vec<ZoneLabel>>,
    pub boundaries: Vec<Boundary>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Classifies an `nt × nv` grid (cell centres on uniform axes including
/// the end points) and extracts the pair boundaries row by row.
pub fn zone_diagram(
    wg: &Waveguide,
    t_range: (f64, f64),
    v_range: (f64, f64),
    grid: (usize, usize),
    s: f64,
) -> Result<ZoneDiagram> {
    let (nt, nv) = grid;
    if !(t_range.0 > 0.0
        && t_range.1 > t_range.0
        && v_range.0 > 0.0
        && v_range.1 > v_range.0
        && nt > 0
        && nv > 0)
    {
        return Err(Error::Config(format!(
            "zone diagram needs positive increasing ranges and a non-empty grid (t {t_range:?}, V {v_range:?}, grid {nt}x{nv})"
        )));
    }
    let ts = linspace(t_range.0, t_range.1, nt);
    let vs = linspace(v_range.0, v_range.1, nv);
    let rows: Vec<(Vec<ZoneLabel>, PairSeparations)> = vs
        .par_iter()
        .map(|&v| -> Result<_> {
            let saddles = find_saddles(v, wg)?;
            let seps = PairSeparations::of(&saddles, v, wg);
            let labels = ts
                .iter()
                .map(|&t| classify_with(t, v, &saddles, &seps, s).label)
                .collect();
            Ok((labels, seps))
        })
        .collect::<Result<_>>()?;
    let mut boundaries = Vec::new();
    for pair in PairKind::ALL {
        let mut polylines: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut current: Vec<(f64, f64)> = Vec::new();
        for (i, (_, seps)) in rows.iter().enumerate() {
            match seps.boundary(pair, vs[i], s) {
                Some(tb) if tb >= t_range.0 && tb <= t_range.1 => current.push((tb, vs[i])),
                _ => {
                    if current.len() > 1 {
                        polylines.push(std::mem::take(&mut current));
                    }
                    current.clear();
                }
            }
        }
        if current.len() > 1 {
            polylines.push(current);
        }
        if !polylines.is_empty() {
            boundaries.push(Boundary { pair, polylines });
        }
    }
    Ok(ZoneDiagram {
        s,
        t: ts,
        v: vs,
        labels: rows.into_iter().map(|r| r.0).collect(),
        boundaries,
    })
}

impl ZoneDiagram {
    /// CSV rows `t,V,label`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,V,label\n");
        for (i, row) in self.labels.iter().enumerate() {
            for (j, l) in row.iter().enumerate() {
                out.push_str(&format!("{:.16e},{:.16e},{}\n", self.t[j], self.v[i], l));
            }
        }
        out
    }

    /// Cells, boundaries and the parent map as one JSON document.
    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .labels
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().map(move |(j, l)| {
                    serde_json::json!({ "t": self.t[j], "V": self.v[i], "label": l.to_string() })
                })
            })
            .collect();
        let parents: serde_json::Map<String, serde_json::Value> =
            ["SP", "SPe", "Ai", "J", "Q", "B"]
                .iter()
                .map(|l| {
                    let p = parent_of(l).expect("known letter");
                    (l.to_string(), serde_json::json!(p))
                })
                .collect();
        serde_json::json!({
            "S": self.s,
            "cells": cells,
            "boundaries": self.boundaries,
            "parents": parents,
        })
    }
}

/// Zones of the scalar Klein-Gordon solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarZoneLabel {
    /// Outside the light cone: the field vanishes.
    Zero,
    /// `z > S`: two-exponential far-field form.
    Far,
    /// `1/S ≤ z ≤ S`: only the exact Bessel form applies.
    Bessel,
    /// `z < 1/S`: the field is close to its front value `-(2c)⁻¹`.
    Near,
}

impl ScalarZoneLabel {
    pub fn name(self) -> &'static str {
        match self {
            ScalarZoneLabel::Zero => "0",
            ScalarZoneLabel::Far => "far",
            ScalarZoneLabel::Bessel => "bessel",
            ScalarZoneLabel::Near => "near",
        }
    }
}

/// Classifies by `z = Ω√(t² - x²/c²)`.
pub fn scalar_zone_classify(t: f64, x: f64, c: f64, omega: f64, s: f64) -> ScalarZoneLabel {
    match scalar_z(t, x, c, omega) {
        None => ScalarZoneLabel::Zero,
        Some(z) if z > s => ScalarZoneLabel::Far,
        Some(z) if z < 1.0 / s => ScalarZoneLabel::Near,
        Some(_) => ScalarZoneLabel::Bessel,
    }
}

/// The zone each asymptotic form is a limit of. The roots (`B` for the
/// waveguide, `bessel` for the scalar equation) have no parent, and
/// neither does the exact zero field `0`.
pub fn parent_of(label: &str) -> Result<Option<&'static str>> {
    Ok(match label {
        "SP" | "SPe" => Some("Ai"),
        "Ai" => Some("Q"),
        "Q" | "J" => Some("B"),
        "B" => None,
        "far" | "near" => Some("bessel"),
        "bessel" | "0" => None,
        other => {
            // composite labels inherit from their dominant letter
            let parsed: ZoneLabel = other.parse()?;
            match parsed.dominant() {
                Some(k) => return parent_of(k.letter()),
                None => return Err(Error::UnknownLabel(other.into())),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WaveguideParams;

    #[test]
    fn labels_round_trip() {
        for s in [
            "0", "B", "Q+SP", "J+2SP", "Ai+2SP", "4SP", "2SP+SPe", "Ai+SP",
        ] {
            let l: ZoneLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert!("X".parse::<ZoneLabel>().is_err());
    }

    #[test]
    fn parents() {
        assert_eq!(parent_of("Ai").unwrap(), Some("Q"));
        assert_eq!(parent_of("B").unwrap(), None);
        assert_eq!(parent_of("bessel").unwrap(), None);
        assert_eq!(parent_of("far").unwrap(), Some("bessel"));
        assert_eq!(parent_of("J+2SP").unwrap(), Some("B"));
        assert!(matches!(parent_of("Z"), Err(Error::UnknownLabel(_))));
        // every chain ends at B
        for l in ["SP", "SPe", "Ai", "J", "Q"] {
            let mut cur = l;
            let mut steps = 0;
            while let Some(p) = parent_of(cur).unwrap() {
                cur = p;
                steps += 1;
                assert!(steps < 10);
            }
            assert_eq!(cur, "B");
        }
    }

    #[test]
    fn supersonic_points_have_no_terms() {
        let wg = Waveguide::preset();
        let c = classify(10.0, 2.5, &wg, DEFAULT_S).unwrap();
        assert!(c.label.is_zero() && c.terms.is_empty());
    }

    #[test]
    fn exchange_wedge_evolves_from_j_to_isolated_saddles() {
        let wg = Waveguide::new(WaveguideParams::exchange_preset()).unwrap();
        let v = 0.5 * (wg.points.v1 + wg.points.v2);
        assert_eq!(
            classify(60.0, v, &wg, DEFAULT_S).unwrap().label.to_string(),
            "J+2SP"
        );
        assert_eq!(
            classify(5000.0, v, &wg, DEFAULT_S)
                .unwrap()
                .label
                .to_string(),
            "4SP"
        );
        assert!(classify(1.0, v, &wg, DEFAULT_S)
            .unwrap()
            .label
            .has(TermKind::B));
    }

    #[test]
    fn zero_threshold_isolates_everything() {
        let wg = Waveguide::preset();
        for &v in &[0.5, 1.0, 1.47, 1.6, 1.9] {
            let c = classify(3.0, v, &wg, 0.0).unwrap();
            assert!(
                c.label.letters.iter().all(|k| *k == TermKind::SPe),
                "{v}: {}",
                c.label
            );
        }
    }

    #[test]
    fn scalar_zones() {
        let (c, om, s) = (2.0_f64, 3.0_f64, 3.0_f64);
        let x = 4.0;
        let t_for = |z: f64| ((z / om).powi(2) + (x / c).powi(2)).sqrt();
        assert_eq!(
            scalar_zone_classify(t_for(2.0 * s), x, c, om, s),
            ScalarZoneLabel::Far
        );
        assert_eq!(
            scalar_zone_classify(t_for(0.5 / s), x, c, om, s),
            ScalarZoneLabel::Near
        );
        assert_eq!(
            scalar_zone_classify(t_for(1.0), x, c, om, s),
            ScalarZoneLabel::Bessel
        );
        assert_eq!(
            scalar_zone_classify(1.0, x, c, om, s),
            ScalarZoneLabel::Zero
        );
    }

    #[test]
    fn diagram_boundaries_are_crossed_once_per_row() {
        let wg = Waveguide::new(WaveguideParams::exchange_preset()).unwrap();
        let d = zone_diagram(&wg, (1.0, 500.0), (0.5, 2.5), (120, 60), DEFAULT_S).unwrap();
        for row in &d.labels {
            // once a cell is free of interacting pairs, later cells stay free
            let isolated = |l: &ZoneLabel| l.letters.iter().all(|k| *k == TermKind::SPe);
            let first = row.iter().position(isolated).unwrap_or(row.len());
            assert!(row[first..].iter().all(isolated));
        }
        let present: std::collections::BTreeSet<TermKind> = d
            .labels
            .iter()
            .flatten()
            .filter_map(|l| l.dominant())
            .collect();
        for k in [
            TermKind::SP,
            TermKind::Ai,
            TermKind::J,
            TermKind::Q,
            TermKind::B,
        ] {
            assert!(present.contains(&k), "{k:?} missing");
        }
        assert!(!d.boundaries.is_empty());
    }
}
