//! Saddle points of the phase `g(ω) = k(ω) - ω/V`.
//!
//! Real saddles solve `v_gr(ω) = V` on a real branch. The indices follow
//! the four-saddle picture: the saddle on the branch with monotone group
//! velocity is `ω★1`; the branch carrying both extrema contributes `ω★2`,
//! `ω★3`, `ω★4` from its rising, falling and rising-again segments. When a
//! pair merges at an extremum and moves off the axis the surviving complex
//! saddle is `ω★5` (beyond the maximum) or `ω★6` (below the minimum).

use serde::Serialize;

use crate::dispersion::{branch_jet, group_velocity, Branch, Extremum, ExtremumKind};
use crate::error::{Error, Result};
use crate::model::C64;
use crate::waveguide::Waveguide;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddlePoint {
    pub index: u8,
    pub branch: Branch,
    pub omega_star: C64,
    pub k_star: C64,
    /// `d²k/dω²` at the saddle.
    pub alpha: C64,
    pub is_real: bool,
    pub passed_by_contour: bool,
}

impl SaddlePoint {
    pub fn g(&self, v: f64) -> C64 {
        self.k_star - self.omega_star / v
    }

    /// `k★x - ω★t`.
    pub fn phase(&self, t: f64, x: f64) -> C64 {
        self.k_star * x - self.omega_star * t
    }

    /// Mirror image under `ω → conj ω` (same index, not passed).
    pub fn conjugate(&self) -> Self {
        Self {
            omega_star: self.omega_star.conj(),
            k_star: self.k_star.conj(),
            alpha: self.alpha.conj(),
            passed_by_contour: false,
            ..*self
        }
    }
}

/// `g(ω) = k_branch(ω) - ω/V` on the principal sheet.
pub fn phase_g(branch: Branch, omega: C64, v: f64, wg: &Waveguide) -> C64 {
    crate::dispersion::branch_k(branch, omega, &wg.params) - omega / v
}

fn real_velocity(branch: Branch, omega: f64, wg: &Waveguide) -> Result<f64> {
    Ok(group_velocity(branch, C64::new(omega, 0.0), &wg.params)?.re)
}

/// Bisection for `f(s) = 0` on `[a, b]` with `f(a) < 0 < f(b)` or the
/// reverse, run until the bracket cannot shrink further.
fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, fa: f64) -> Result<f64> {
    loop {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
}

/// Real roots of `v_gr = V` on one branch, tagged with the index of the
/// monotone segment they lie on.
fn branch_roots(branch: Branch, v: f64, wg: &Waveguide) -> Result<Vec<(usize, f64)>> {
    let cutoff = branch.cutoff(&wg.params);
    let c = branch.asymptotic_speed(&wg.params);
    let mut knots: Vec<f64> = wg
        .structure
        .turning_points
        .iter()
        .filter(|e| e.branch == branch)
        .map(|e| e.omega)
        .collect();
    knots.sort_by(f64::total_cmp);
    let mut roots = Vec::new();
    let mut left = (cutoff, -v); // v_gr vanishes at the cut-off
    for (seg, &right) in knots.iter().enumerate() {
        let fr = real_velocity(branch, right, wg)? - v;
        if left.1 * fr < 0.0 {
            let w = bisect(
                |w| Ok(real_velocity(branch, w, wg)? - v),
                left.0,
                right,
                left.1,
            )?;
            roots.push((seg, w));
        } else if fr == 0.0 {
            roots.push((seg, right));
        }
        left = (right, fr);
    }
    // last segment reaches ω = ∞, where v_gr → c; bisect in u = 1/ω
    let seg = knots.len();
    let f_inf = c - v;
    if left.1 * f_inf < 0.0 {
        let fu = |u: f64| -> Result<f64> {
            if u == 0.0 {
                Ok(f_inf)
            } else {
                Ok(real_velocity(branch, 1.0 / u, wg)? - v)
            }
        };
        let u = bisect(fu, 1.0 / left.0, 0.0, left.1)?;
        if u > 0.0 {
            roots.push((seg, 1.0 / u));
        }
    }
    Ok(roots)
}

fn make_saddle(index: u8, branch: Branch, omega: C64, wg: &Waveguide) -> Result<SaddlePoint> {
    let jet = branch_jet(branch, omega, &wg.params)?;
    Ok(SaddlePoint {
        index,
        branch,
        omega_star: omega,
        k_star: jet.k,
        alpha: jet.dk[1],
        is_real: omega.im == 0.0,
        passed_by_contour: true,
    })
}

/// Real saddles for formal velocity `V = x/t`, sorted by index.
pub fn find_real_saddles(v: f64, wg: &Waveguide) -> Result<Vec<SaddlePoint>> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(v > 0.0) {
        return Err(Error::NonPositiveParameter {
            name: "V",
            value: v,
        });
    }
    let mut per_branch = Vec::new();
    for b in Branch::BOTH {
        let turning = wg
            .structure
            .turning_points
            .iter()
            .filter(|e| e.branch == b)
            .count();
        per_branch.push((b, turning, branch_roots(b, v, wg)?));
    }
    let standard = {
        let t: Vec<usize> = per_branch.iter().map(|x| x.1).collect();
        (t[0] == 0 && t[1] == 2) || (t[0] == 2 && t[1] == 0)
    };
    let mut out = Vec::new();
    if standard {
        for (b, turning, roots) in &per_branch {
            for &(seg, w) in roots {
                let index = if *turning == 0 { 1 } else { 2 + seg as u8 };
                out.push(make_saddle(index, *b, C64::new(w, 0.0), wg)?);
            }
        }
    } else {
        let mut all: Vec<(Branch, f64)> = per_branch
            .iter()
            .flat_map(|(b, _, r)| r.iter().map(move |&(_, w)| (*b, w)))
            .collect();
        all.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (i, (b, w)) in all.into_iter().enumerate() {
            out.push(make_saddle(i as u8 + 1, b, C64::new(w, 0.0), wg)?);
        }
    }
    out.sort_by_key(|s| s.index);
    Ok(out)
}

/// Newton iteration on `dk/dω = 1/V` along one branch of the principal
/// sheet. `None` when the iterate leaves the strip or fails to settle.
fn newton_saddle(branch: Branch, seed: C64, v: f64, wg: &Waveguide) -> Option<C64> {
    let strip = wg.strip_height();
    let mut w = seed;
    for _ in 0..60 {
        let jet = branch_jet(branch, w, &wg.params).ok()?;
        let step = (jet.dk[0] - 1.0 / v) / jet.dk[1];
        w -= step;
        if !w.re.is_finite() || w.im.abs() >= strip || w.re <= 0.0 {
            return None;
        }
        if step.norm() < 1e-14 * w.norm() {
            return Some(w);
        }
    }
    None
}

/// The complex saddle grown from the pair that merged at `v1'` (for
/// `V > v1'`) or at `v2'` (for `V < v2'`), continued by Newton iteration
/// from the cubic model around the extremum.
///
/// Only the member of the conjugate pair with `Im g > 0` is returned, since
/// that is the one the deformed contour passes. The result is empty when
/// `V` lies between the extrema, when coupling is absent, or when the
/// continuation leaves the strip in which the principal sheet is defined.
pub fn find_complex_saddles(v: f64, wg: &Waveguide) -> Result<Vec<SaddlePoint>> {
    let Some(ext) = wg.structure.extrema else {
        return Ok(Vec::new());
    };
    let (e, index): (Extremum, u8) = if v > ext.max.velocity {
        (ext.max, 5)
    } else if v < ext.min.velocity {
        (ext.min, 6)
    } else {
        return Ok(Vec::new());
    };
    debug_assert!(match index {
        5 => e.kind == ExtremumKind::Maximum,
        _ => e.kind == ExtremumKind::Minimum,
    });
    // k'(ω) ≈ 1/v' - α_A (ω - ωe)², so (ω - ωe)² = (1/v' - 1/V)/α_A
    let d2 = C64::new((1.0 / e.velocity - 1.0 / v) / e.alpha, 0.0);
    let d = d2.sqrt();
    let mut best: Option<(f64, C64)> = None;
    let mut converged_any = false;
    for seed in [e.omega + d, e.omega - d] {
        let Some(w) = newton_saddle(e.branch, seed, v, wg) else {
            continue;
        };
        converged_any = true;
        if w.im == 0.0 || phase_g(e.branch, w, v, wg).im <= 0.0 {
            continue;
        }
        let dist = (w - e.omega).norm();
        if best.is_none_or(|(b, _)| dist < b) {
            best = Some((dist, w));
        }
    }
    match best {
        Some((_, w)) => Ok(vec![make_saddle(index, e.branch, w, wg)?]),
        None if converged_any || d.norm() > 0.5 * wg.strip_height() => Ok(Vec::new()),
        None => Err(Error::NoConvergence {
            what: "complex saddle continuation",
            achieved: d.norm(),
        }),
    }
}

/// Every saddle the deformed contour passes for this `V`.
pub fn find_saddles(v: f64, wg: &Waveguide) -> Result<Vec<SaddlePoint>> {
    let mut s = find_real_saddles(v, wg)?;
    s.extend(find_complex_saddles(v, wg)?);
    Ok(s)
}

/// Modulus of the difference of `k x - ω t` between two saddles.
///
/// For real saddles this is the absolute difference of real phases; for a
/// complex saddle and its mirror it is `2x|Im g|`, the exponent that
/// separates their magnitudes.
pub fn phase_difference(m: &SaddlePoint, n: &SaddlePoint, t: f64, x: f64) -> f64 {
    (m.phase(t, x) - n.phase(t, x)).norm()
}

/// Half-widths of the domain of influence measured along the steepest
/// descent direction, from the quadratic model of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoiInterval {
    pub a1: f64,
    pub a2: f64,
}

impl DoiInterval {
    /// Unit direction of steepest descent of `e^{ixg}` through the saddle.
    pub fn direction(sp: &SaddlePoint) -> C64 {
        // i α l² e^{2iθ} / 2 must be real negative: 2θ = π/2 - arg α
        C64::from_polar(1.0, 0.25 * std::f64::consts::PI - 0.5 * sp.alpha.arg())
    }

    /// The two end points in the ω plane.
    pub fn endpoints(&self, sp: &SaddlePoint) -> [C64; 2] {
        let d = Self::direction(sp);
        [sp.omega_star + d * self.a1, sp.omega_star + d * self.a2]
    }
}

const CURVATURE_TOL: f64 = 1e-10;

pub fn doi_interval(sp: &SaddlePoint, x: f64, s: f64) -> Result<DoiInterval> {
    let a = sp.alpha.norm();
    if a < CURVATURE_TOL {
        return Err(Error::DegenerateCurvature { alpha: a });
    }
    let w = (2.0 * s / (x * a)).sqrt();
    Ok(DoiInterval { a1: -w, a2: w })
}

/// Pairs whose domains of influence can merge: adjacent saddles on the
/// three-saddle branch, the pair linked through the exchange region, and a
/// complex saddle with its own mirror.
pub fn are_neighbors(m: &SaddlePoint, n: &SaddlePoint) -> bool {
    let (a, b) = (m.index.min(n.index), m.index.max(n.index));
    match (a, b) {
        (2, 3) | (3, 4) | (1, 3) => true,
        (i, j) if i == j => !m.is_real && m.omega_star == n.omega_star.conj(),
        _ => false,
    }
}

pub fn neighbors_overlap(m: &SaddlePoint, n: &SaddlePoint, t: f64, x: f64, s: f64) -> bool {
    are_neighbors(m, n) && phase_difference(m, n, t, x) < s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::branch_jet;

    fn wg() -> Waveguide {
        Waveguide::preset()
    }

    fn indices(v: f64, w: &Waveguide) -> Vec<u8> {
        find_real_saddles(v, w)
            .unwrap()
            .iter()
            .map(|s| s.index)
            .collect()
    }

    #[test]
    fn counts_follow_the_thresholds() {
        let w = wg();
        let e = w.structure.extrema.unwrap();
        assert!(indices(2.1, &w).is_empty());
        assert_eq!(indices(1.9, &w), vec![1]);
        assert_eq!(
            indices(0.5 * (e.max.velocity + w.params.c2), &w),
            vec![1, 4]
        );
        assert_eq!(
            indices(0.5 * (e.max.velocity + e.min.velocity), &w),
            vec![1, 2, 3, 4]
        );
        assert_eq!(indices(1.0, &w), vec![1, 2]);
    }

    #[test]
    fn saddles_solve_the_stationarity_condition() {
        let w = wg();
        for &v in &[0.3, 1.0, 1.45, 1.47, 1.6, 1.799, 1.95] {
            for s in find_real_saddles(v, &w).unwrap() {
                let vg = group_velocity(s.branch, s.omega_star, &w.params)
                    .unwrap()
                    .re;
                assert!((vg - v).abs() < 1e-10 * v, "V={v} idx={} vg={vg}", s.index);
                assert!(s.is_real && s.alpha.im == 0.0);
            }
        }
    }

    #[test]
    fn curvature_matches_finite_difference() {
        let w = wg();
        let h = 1e-5;
        for s in find_real_saddles(1.47, &w).unwrap() {
            let kp = |o: f64| {
                branch_jet(s.branch, C64::new(o, 0.0), &w.params)
                    .unwrap()
                    .dk[0]
                    .re
            };
            let fd = (kp(s.omega_star.re + h) - kp(s.omega_star.re - h)) / (2.0 * h);
            assert!((fd - s.alpha.re).abs() < 1e-5 * s.alpha.re.abs());
        }
    }

    #[test]
    fn complex_saddles_beyond_each_extremum() {
        let w = wg();
        let e = w.structure.extrema.unwrap();
        let above = find_complex_saddles(e.max.velocity + 1e-3, &w).unwrap();
        assert_eq!(above.len(), 1);
        assert_eq!(above[0].index, 5);
        assert!(above[0].g(e.max.velocity + 1e-3).im > 0.0);
        let below = find_complex_saddles(e.min.velocity - 1e-3, &w).unwrap();
        assert_eq!(below.len(), 1);
        assert_eq!(below[0].index, 6);
        assert!(below[0].omega_star.im < 0.0);
        assert!(below[0].g(e.min.velocity - 1e-3).im > 0.0);
        assert!(find_complex_saddles(e.max.velocity, &w).unwrap().is_empty());
        let mid = 0.5 * (e.max.velocity + e.min.velocity);
        assert!(find_complex_saddles(mid, &w).unwrap().is_empty());
    }

    #[test]
    fn phase_difference_is_linear_in_t() {
        let w = wg();
        let v = 0.5 * (w.points.v1 + w.points.v2);
        let s = find_real_saddles(v, &w).unwrap();
        let d1 = phase_difference(&s[0], &s[1], 10.0, 10.0 * v);
        let d2 = phase_difference(&s[0], &s[1], 30.0, 30.0 * v);
        assert!((d2 - 3.0 * d1).abs() < 1e-10 * d2);
        assert_eq!(phase_difference(&s[0], &s[0], 10.0, 5.0), 0.0);
        let x = 7.0;
        let direct = (s[0].g(v) - s[1].g(v)).norm() * x;
        assert!((phase_difference(&s[0], &s[1], x / v, x) - direct).abs() < 1e-12);
    }

    #[test]
    fn doi_width_scaling_and_level() {
        let w = wg();
        let v = 1.0;
        let sp = find_real_saddles(v, &w).unwrap()[0];
        let d1 = doi_interval(&sp, 100.0, 3.0).unwrap();
        let d4 = doi_interval(&sp, 400.0, 3.0).unwrap();
        assert!((d1.a2 / d4.a2 - 2.0).abs() < 1e-12);
        assert_eq!(doi_interval(&sp, 100.0, 0.0).unwrap().a2, 0.0);
        let x = 400.0;
        for end in d4.endpoints(&sp) {
            let rise = x * (phase_g(sp.branch, end, v, &w) - sp.g(v)).im;
            assert!((rise / 3.0 - 1.0).abs() < 0.2, "{rise}");
        }
    }

    #[test]
    fn neighbour_rule() {
        let w = wg();
        let e = w.structure.extrema.unwrap();
        let s = find_real_saddles(0.5 * (e.max.velocity + e.min.velocity), &w).unwrap();
        assert!(are_neighbors(&s[0], &s[2]));
        assert!(are_neighbors(&s[1], &s[2]));
        assert!(!are_neighbors(&s[0], &s[1]));
        assert!(!are_neighbors(&s[1], &s[3]));
        let c = find_complex_saddles(e.max.velocity + 1e-3, &w).unwrap()[0];
        assert!(are_neighbors(&c, &c.conjugate()));
        let t = 10.0;
        let x = 1.47 * t;
        let d = phase_difference(&s[0], &s[2], t, x);
        assert!(!neighbors_overlap(&s[0], &s[2], t, x, 0.5 * d));
        assert!(neighbors_overlap(&s[0], &s[2], t, x, 2.0 * d));
    }
}
