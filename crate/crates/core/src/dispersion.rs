//! Solutions of the dispersion equation `D(ω, k) = 0`.
//!
//! `D` is a quadratic in `K = k²`, so the four roots are available in closed
//! form. The two propagating modes are labelled by their high-frequency
//! asymptote: branch 1 tends to `ω/c1`, branch 2 to `ω/c2`.
//!
//! For `μ > 0` the discriminant of the quadratic never vanishes on the real
//! axis, so on the real axis branch 1 is always the root with the smaller
//! `K`. The principal sheet used throughout the crate continues that real
//! labelling into the strip between the exchange branch points, taking
//! `Im k ≥ 0` above the real axis and the Schwarz reflection below it.
//! [`BranchFunction`] follows a root along an explicit path instead and is
//! what to use when a path leaves that strip.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{implicit_k_derivatives, DispersionPartials, WaveguideParams, C64};

/// Mode label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::One, Branch::Two];

    pub fn index(self) -> usize {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }

    /// High-frequency phase speed of this mode.
    pub fn asymptotic_speed(self, params: &WaveguideParams) -> f64 {
        match self {
            Branch::One => params.c1,
            Branch::Two => params.c2,
        }
    }

    /// Real frequency below which this mode is evanescent.
    pub fn cutoff(self, params: &WaveguideParams) -> f64 {
        if params.mu == 0.0 {
            return params.layer(self.index()).1;
        }
        let [lo, hi] = cutoff_pair(params);
        match self {
            Branch::One => hi,
            Branch::Two => lo,
        }
    }
}

/// Coefficients of `c1²c2² K² + b K + c = 0`.
#[inline]
fn k2_quadratic(omega: C64, params: &WaveguideParams) -> (f64, C64, C64) {
    let (c1, c2) = (params.c1, params.c2);
    let w2 = omega * omega;
    let a1 = w2 - params.omega1 * params.omega1;
    let a2 = w2 - params.omega2 * params.omega2;
    let a = c1 * c1 * c2 * c2;
    let b = -(a2 * (c1 * c1) + a1 * (c2 * c2));
    let c = a1 * a2 - params.mu * params.mu;
    (a, b, c)
}

/// Both roots of the quadratic in `K` given a square root of its discriminant.
#[inline]
fn k2_roots(a: f64, b: C64, c: C64, sqrt_disc: C64) -> (C64, C64) {
    // (-b - s) / 2a and (-b + s) / 2a, avoiding cancellation in either.
    let minus = -b - sqrt_disc;
    let plus = -b + sqrt_disc;
    if plus.norm() >= minus.norm() {
        let k_plus = plus / (2.0 * a);
        let k_minus = if k_plus.norm() == 0.0 {
            minus / (2.0 * a)
        } else {
            c / (a * k_plus)
        };
        (k_minus, k_plus)
    } else {
        let k_minus = minus / (2.0 * a);
        let k_plus = if k_minus.norm() == 0.0 {
            plus / (2.0 * a)
        } else {
            c / (a * k_minus)
        };
        (k_minus, k_plus)
    }
}

/// All four roots `k` of `D(ω, k) = 0` as `[+ka, -ka, +kb, -kb]`, where
/// `ka`, `kb` are principal square roots of the two roots of the quadratic
/// in `k²`. Repeated roots are returned with multiplicity.
pub fn roots_k(omega: C64, params: &WaveguideParams) -> [C64; 4] {
    let (a, b, c) = k2_quadratic(omega, params);
    let disc = b * b - 4.0 * a * c;
    let (ka2, kb2) = k2_roots(a, b, c, disc.sqrt());
    let (ka, kb) = (ka2.sqrt(), kb2.sqrt());
    [ka, -ka, kb, -kb]
}

/// The two roots with `Im k > 0` (or `Re k > 0` on the real propagating
/// axis), in no particular order. Both modes together, so no labelling is
/// needed; this is what the modal integral sums over.
pub fn upper_roots(omega: C64, params: &WaveguideParams) -> [C64; 2] {
    let (a, b, c) = k2_quadratic(omega, params);
    let disc = b * b - 4.0 * a * c;
    let (ka2, kb2) = k2_roots(a, b, c, disc.sqrt());
    [upper_sqrt(ka2, omega.im), upper_sqrt(kb2, omega.im)]
}

/// Square root lying in the closed upper half plane. On the real ω axis the
/// imaginary part of `k2` is rounding noise and is dropped.
#[inline]
fn upper_sqrt(mut k2: C64, omega_im: f64) -> C64 {
    if omega_im == 0.0 {
        k2.im = 0.0;
    }
    let s = k2.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// `k_branch(ω)` on the principal sheet.
///
/// Valid for `|Im ω|` below the imaginary part of the exchange branch points
/// (and everywhere for `μ = 0`). Below the real axis the value is the
/// continuation through the propagating part of the real axis.
pub fn branch_k(branch: Branch, omega: C64, params: &WaveguideParams) -> C64 {
    if omega.im < 0.0 {
        return branch_k(branch, omega.conj(), params).conj();
    }
    let k2 = if params.mu == 0.0 {
        let (c, w) = params.layer(branch.index());
        (omega * omega - w * w) / (c * c)
    } else {
        let (c1, c2) = (params.c1, params.c2);
        let dc = c1 * c1 - c2 * c2;
        let omega_sh2 = (c1 * c1 * params.omega2 * params.omega2
            - c2 * c2 * params.omega1 * params.omega1)
            / dc;
        let delta = 2.0 * c1 * c2 * params.mu / dc;
        let w = omega * omega - omega_sh2;
        let sqrt_disc = (w * w + delta * delta).sqrt() * dc;
        let (a, b, c) = k2_quadratic(omega, params);
        let (k_minus, k_plus) = k2_roots(a, b, c, sqrt_disc);
        match branch {
            Branch::One => k_minus,
            Branch::Two => k_plus,
        }
    };
    upper_sqrt(k2, omega.im)
}

/// Value and ω-derivatives of `k` on one branch.
#[derive(Debug, Clone, Copy)]
pub struct BranchJet {
    pub omega: C64,
    pub k: C64,
    /// `dk/dω`, `d²k/dω²`, `d³k/dω³`.
    pub dk: [C64; 3],
    pub partials: DispersionPartials,
}

impl BranchJet {
    pub fn group_velocity(&self) -> C64 {
        1.0 / self.dk[0]
    }
}

/// Relative size below which `∂D/∂k` or `∂D/∂ω` counts as vanishing.
const DEGENERACY_TOL: f64 = 1e-13;

fn scale(omega: C64, params: &WaveguideParams) -> f64 {
    let s = omega.norm().max(params.omega2);
    s * s * s
}

pub fn branch_jet(branch: Branch, omega: C64, params: &WaveguideParams) -> Result<BranchJet> {
    let k = branch_k(branch, omega, params);
    jet_at(omega, k, params)
}

pub(crate) fn jet_at(omega: C64, k: C64, params: &WaveguideParams) -> Result<BranchJet> {
    let partials = DispersionPartials::at(omega, k, params);
    let s = scale(omega, params);
    if partials.d_k().norm() < DEGENERACY_TOL * s * (1.0 + params.c1 * params.c1) {
        return Err(Error::BranchPointProximity { omega });
    }
    let dk = implicit_k_derivatives(&partials);
    Ok(BranchJet {
        omega,
        k,
        dk,
        partials,
    })
}

/// Group velocity `(dk/dω)⁻¹ = -∂kD / ∂ωD`.
pub fn group_velocity(branch: Branch, omega: C64, params: &WaveguideParams) -> Result<C64> {
    let k = branch_k(branch, omega, params);
    let p = DispersionPartials::at(omega, k, params);
    if p.d_omega().norm() < DEGENERACY_TOL * scale(omega, params) {
        return Err(Error::BranchPointProximity { omega });
    }
    Ok(-p.d_k() / p.d_omega())
}

/// A branch followed by continuity from an anchor point.
///
/// Each call to [`k_at`](Self::k_at) walks a straight segment from the
/// current anchor to the requested point, picking at every step the root
/// closest to a first-order prediction, and halving the step while the
/// choice is ambiguous. The end point becomes the new anchor, so a sequence
/// of calls traces a polyline path across the Riemann surface.
#[derive(Debug, Clone)]
pub struct BranchFunction {
    pub label: Branch,
    params: WaveguideParams,
    anchor: (C64, C64),
}

impl BranchFunction {
    /// Anchored on the real axis far above every structural frequency,
    /// where the label is fixed by the asymptote.
    pub fn new(label: Branch, params: &WaveguideParams) -> Self {
        let [_, hi] = cutoff_pair(params);
        let sh = crate::model::shestopalov(params)
            .map(|s| s.omega_sh)
            .unwrap_or(hi);
        let w = C64::new(4.0 * sh.max(hi), 0.0);
        let k = branch_k(label, w, params);
        Self {
            label,
            params: *params,
            anchor: (w, k),
        }
    }

    pub fn with_anchor(label: Branch, params: &WaveguideParams, omega: C64, k: C64) -> Self {
        Self {
            label,
            params: *params,
            anchor: (omega, k),
        }
    }

    pub fn anchor(&self) -> (C64, C64) {
        self.anchor
    }

    pub fn k_at(&mut self, omega: C64) -> Result<C64> {
        let (start, mut k) = self.anchor;
        let span = omega - start;
        let len = span.norm();
        if len == 0.0 {
            return Ok(k);
        }
        let base = 0.02
            * self
                .params
                .omega1
                .min(self.params.omega2 - self.params.omega1)
                .max(1e-3);
        let mut s = 0.0_f64;
        let mut h = (base / len).min(1.0);
        let mut here = start;
        while s < 1.0 {
            let step = h.min(1.0 - s);
            let next = start + span * (s + step);
            match self.step(here, k, next) {
                Some(knext) => {
                    k = knext;
                    here = next;
                    s += step;
                    h = (h * 1.5).min(base / len * 4.0);
                }
                None => {
                    h = step * 0.5;
                    if h * len < 1e-12 * (1.0 + omega.norm()) {
                        return Err(Error::BranchPointProximity { omega: next });
                    }
                }
            }
        }
        self.anchor = (omega, k);
        Ok(k)
    }

    fn step(&self, here: C64, k: C64, next: C64) -> Option<C64> {
        let p = DispersionPartials::at(here, k, &self.params);
        let predicted = if p.d_k().norm() > 0.0 {
            k - p.d_omega() / p.d_k() * (next - here)
        } else {
            k
        };
        let roots = roots_k(next, &self.params);
        let mut d: Vec<(f64, C64)> = roots.iter().map(|r| ((r - predicted).norm(), *r)).collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (d1, best) = d[0];
        // Ambiguous when the runner-up is within twice the winner's distance.
        if d[1].0 < 2.0 * d1 || d[1].0 == 0.0 {
            return None;
        }
        Some(best)
    }
}

/// Positive real cut-off frequencies `[lower, upper]` without validation.
fn cutoff_pair(params: &WaveguideParams) -> [f64; 2] {
    let (o1, o2, mu) = (params.omega1, params.omega2, params.mu);
    let mean = 0.5 * (o1 * o1 + o2 * o2);
    let half = 0.5 * (o2 * o2 - o1 * o1);
    let hi2 = mean + (half * half + mu * mu).sqrt();
    let lo2 = (o1 * o1 * o2 * o2 - mu * mu) / hi2;
    [lo2.max(0.0).sqrt(), hi2.sqrt()]
}

/// Roots of `D(ω, 0) = 0` on the positive real axis, ascending.
pub fn cutoff_frequencies(params: &WaveguideParams) -> Result<[f64; 2]> {
    let limit = params.omega1 * params.omega2;
    if params.mu >= limit {
        return Err(Error::OverstrongCoupling {
            mu: params.mu,
            limit,
        });
    }
    Ok(cutoff_pair(params))
}

/// Complex frequencies where the two modes exchange sheets: zeros of the
/// discriminant of the quadratic in `k²`, which lie at
/// `ω² = ω_sh² ± 2i c1 c2 μ / (c1² - c2²)`. Returned as the quadruple
/// `[ω, -ω, conj ω, -conj ω]` with `Re ω > 0, Im ω > 0`; empty for `μ = 0`.
pub fn exchange_branch_points(params: &WaveguideParams) -> Vec<C64> {
    if params.mu == 0.0 {
        return Vec::new();
    }
    let (c1, c2) = (params.c1, params.c2);
    let dc = c1 * c1 - c2 * c2;
    let omega_sh2 =
        (c1 * c1 * params.omega2 * params.omega2 - c2 * c2 * params.omega1 * params.omega1) / dc;
    let delta = 2.0 * c1 * c2 * params.mu / dc;
    let w = C64::new(omega_sh2, delta).sqrt();
    let pts = vec![w, -w, w.conj(), -w.conj()];
    // k = 0 would make this a cut-off point instead
    pts.into_iter()
        .filter(|&p| {
            let (a, b, _) = k2_quadratic(p, params);
            (b / (2.0 * a)).norm() > 1e-12
        })
        .collect()
}

/// Kind of group-velocity extremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

/// A local extremum of the real group velocity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub branch: Branch,
    pub omega: f64,
    pub k: f64,
    pub velocity: f64,
    /// `-½ d³k/dω³` at the extremum: the cubic coefficient of the Airy model.
    pub alpha: f64,
}

/// `v1'` (local maximum) and `v2'` (local minimum) with their frequencies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroupVelocityExtrema {
    pub max: Extremum,
    pub min: Extremum,
}

fn real_d2k(branch: Branch, omega: f64, params: &WaveguideParams) -> Result<f64> {
    Ok(branch_jet(branch, C64::new(omega, 0.0), params)?.dk[1].re)
}

fn extremum_window(params: &WaveguideParams) -> Result<(f64, f64)> {
    let sh = crate::model::shestopalov(params)?;
    let [_, upper] = cutoff_frequencies(params)?;
    Ok((
        upper.max(0.5 * sh.omega_sh) * (1.0 + 1e-9),
        1.5 * sh.omega_sh,
    ))
}

/// Every zero of `d²k/dω²` on either real branch inside
/// `[max(upper cut-off, ω_sh/2), 3ω_sh/2]`, found by a 2001-point scan and
/// bisection. Outside that window both group velocities are monotone.
pub fn velocity_turning_points(params: &WaveguideParams) -> Result<Vec<Extremum>> {
    let (lo, hi) = extremum_window(params)?;
    if params.mu == 0.0 || lo >= hi {
        return Ok(Vec::new());
    }
    const N: usize = 2001;
    let grid: Vec<f64> = (0..N)
        .map(|i| lo + (hi - lo) * i as f64 / (N - 1) as f64)
        .collect();
    let mut found: Vec<Extremum> = Vec::new();
    for branch in Branch::BOTH {
        let vals: Vec<f64> = grid
            .iter()
            .map(|&w| real_d2k(branch, w, params))
            .collect::<Result<_>>()?;
        for i in 0..N - 1 {
            if vals[i] == 0.0 || vals[i].signum() == vals[i + 1].signum() {
                continue;
            }
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let fa = vals[i];
            loop {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = real_d2k(branch, m, params)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            let w = 0.5 * (a + b);
            let jet = branch_jet(branch, C64::new(w, 0.0), params)?;
            let d3 = jet.dk[2].re;
            found.push(Extremum {
                kind: if d3 > 0.0 {
                    ExtremumKind::Maximum
                } else {
                    ExtremumKind::Minimum
                },
                branch,
                omega: w,
                k: jet.k.re,
                velocity: 1.0 / jet.dk[0].re,
                alpha: -0.5 * d3,
            });
        }
    }
    Ok(found)
}

/// Locates `v1'` and `v2'`: the local maximum and minimum of the group
/// velocity closest to the crossing frequency.
pub fn group_velocity_extrema(params: &WaveguideParams) -> Result<GroupVelocityExtrema> {
    let (lo, hi) = extremum_window(params)?;
    if params.mu == 0.0 {
        return Err(Error::ExtremumNotFound { lo, hi });
    }
    let sh = crate::model::shestopalov(params)?;
    let found = velocity_turning_points(params)?;
    let pick = |kind: ExtremumKind| {
        found
            .iter()
            .filter(|e| e.kind == kind)
            .min_by(|a, b| {
                (a.omega - sh.omega_sh)
                    .abs()
                    .total_cmp(&(b.omega - sh.omega_sh).abs())
            })
            .copied()
    };
    match (pick(ExtremumKind::Maximum), pick(ExtremumKind::Minimum)) {
        (Some(max), Some(min)) => Ok(GroupVelocityExtrema { max, min }),
        _ => Err(Error::ExtremumNotFound { lo, hi }),
    }
}

/// Cut-offs, exchange branch points and group-velocity extrema together.
#[derive(Debug, Clone, Serialize)]
pub struct StructuralPoints {
    pub cutoffs: [f64; 2],
    pub exchange_points: Vec<C64>,
    /// `None` for the unperturbed system.
    pub extrema: Option<GroupVelocityExtrema>,
    pub turning_points: Vec<Extremum>,
}

impl StructuralPoints {
    pub fn compute(params: &WaveguideParams) -> Result<Self> {
        let cutoffs = cutoff_frequencies(params)?;
        let turning_points = velocity_turning_points(params)?;
        let extrema = if params.mu > 0.0 {
            Some(group_velocity_extrema(params)?)
        } else {
            None
        };
        Ok(Self {
            cutoffs,
            exchange_points: exchange_branch_points(params),
            extrema,
            turning_points,
        })
    }

    /// Height of the strip around the real axis where the principal sheet
    /// is analytic; infinite without coupling.
    pub fn strip_height(&self) -> f64 {
        self.exchange_points
            .iter()
            .map(|p| p.im.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// One row of the real dispersion diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramSample {
    pub omega: f64,
    pub k1: f64,
    pub k2: f64,
    pub vg1: f64,
    pub vg2: f64,
}

/// `n` uniformly spaced samples of both real branches and their group
/// velocities on `[omega_min, omega_max]`, which must lie above both
/// cut-offs.
pub fn sample_diagram(
    params: &WaveguideParams,
    omega_min: f64,
    omega_max: f64,
    n: usize,
) -> Result<Vec<DiagramSample>> {
    let upper = Branch::One.cutoff(params).max(Branch::Two.cutoff(params));
    if !(omega_min > upper && omega_max > omega_min && n >= 2) {
        return Err(Error::Config(format!(
            "dispersion range [{omega_min}, {omega_max}] must lie above the cut-off {upper} with n >= 2"
        )));
    }
    (0..n)
        .map(|i| {
            let w = omega_min + (omega_max - omega_min) * i as f64 / (n - 1) as f64;
            let wc = C64::new(w, 0.0);
            let j1 = branch_jet(Branch::One, wc, params)?;
            let j2 = branch_jet(Branch::Two, wc, params)?;
            Ok(DiagramSample {
                omega: w,
                k1: j1.k.re,
                k2: j2.k.re,
                vg1: j1.group_velocity().re,
                vg2: j2.group_velocity().re,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dispersion_d, shestopalov};

    fn p() -> WaveguideParams {
        WaveguideParams::preset()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn unperturbed_roots_factor() {
        let q = p().with_mu(0.0);
        let w = 2.0 * q.omega2;
        let r = roots_k(re(w), &q);
        let a = (w * w - q.omega1 * q.omega1).sqrt() / q.c1;
        let b = 3.0_f64.sqrt() * q.omega2 / q.c2;
        let mut got: Vec<f64> = r.iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        let mut want = vec![-a, a, -b, b];
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn roots_close_the_dispersion_equation() {
        let q = p();
        for &w in &[
            re(0.3),
            re(3.2),
            re(5.1),
            C64::new(4.0, 0.7),
            C64::new(-7.0, -2.0),
        ] {
            let r = roots_k(w, &q);
            assert_eq!(r[1], -r[0]);
            assert_eq!(r[3], -r[2]);
            for k in r {
                let scale = 1.0 + w.norm().powi(4);
                assert!(dispersion_d(w, k, &q).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn gap_at_the_crossing() {
        let q = p();
        let sh = shestopalov(&q).unwrap();
        let k1 = branch_k(Branch::One, re(sh.omega_sh), &q).re;
        let k2 = branch_k(Branch::Two, re(sh.omega_sh), &q).re;
        assert!(k1 < sh.k_sh && sh.k_sh < k2);
        let gap = q.mu / (q.c1 * q.c2 * sh.k_sh);
        assert!(((k2 - k1) - gap).abs() < 0.02 * gap, "{} vs {gap}", k2 - k1);
    }

    #[test]
    fn asymptotes_label_the_branches() {
        let q = p();
        assert!((branch_k(Branch::One, re(100.0), &q).re / 50.0 - 1.0).abs() < 0.01);
        assert!((branch_k(Branch::Two, re(100.0), &q).re / (100.0 / 1.8) - 1.0).abs() < 0.01);
        let v = group_velocity(Branch::One, re(1e4), &q).unwrap().re;
        assert!((v - 2.0).abs() < 1e-4);
    }

    #[test]
    fn shifted_line_has_decaying_roots() {
        let q = p();
        for i in 0..200 {
            let w = C64::new(3.6 + 0.05 * i as f64, 1e-3);
            for b in Branch::BOTH {
                assert!(branch_k(b, w, &q).im > 0.0, "{b:?} at {w}");
            }
        }
    }

    #[test]
    fn reflection_below_the_axis() {
        let q = p();
        let w = C64::new(4.4, 0.2);
        let k = branch_k(Branch::Two, w, &q);
        assert_eq!(branch_k(Branch::Two, w.conj(), &q), k.conj());
    }

    #[test]
    fn unperturbed_branches_are_scalar() {
        let q = p().with_mu(0.0);
        for i in 0..50 {
            let w = 3.6 + 0.3 * i as f64;
            for b in Branch::BOTH {
                let (c, o) = q.layer(b.index());
                let exact = (w * w - o * o).sqrt() / c;
                assert!((branch_k(b, re(w), &q).re - exact).abs() < 1e-12 * exact);
                let v = group_velocity(b, re(w), &q).unwrap().re;
                assert!((v - c * (w * w - o * o).sqrt() / w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn implicit_group_velocity_matches_finite_difference() {
        let q = p();
        let h = 1e-5;
        for i in 0..40 {
            let w = 3.6 + 0.11 * i as f64;
            for b in Branch::BOTH {
                let fd = (branch_k(b, re(w + h), &q) - branch_k(b, re(w - h), &q)).re / (2.0 * h);
                let v = group_velocity(b, re(w), &q).unwrap().re;
                assert!((v * fd - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cutoffs() {
        let q = p();
        let [lo, hi] = cutoff_frequencies(&q).unwrap();
        assert!(lo < 3.0 && hi > 3.5);
        for w in [lo, hi] {
            assert!(dispersion_d(re(w), C64::new(0.0, 0.0), &q).norm() < 1e-12);
        }
        assert_eq!(cutoff_frequencies(&q.with_mu(0.0)).unwrap(), [3.0, 3.5]);
        assert!(matches!(
            cutoff_frequencies(&q.with_mu(10.5)),
            Err(Error::OverstrongCoupling { .. })
        ));
        assert_eq!(Branch::One.cutoff(&q), hi);
        assert_eq!(Branch::Two.cutoff(&q), lo);
    }

    #[test]
    fn exchange_points_are_double_roots() {
        let q = p();
        let pts = exchange_branch_points(&q);
        assert_eq!(pts.len(), 4);
        for &w in &pts {
            assert!(pts.iter().any(|z| (z - w.conj()).norm() < 1e-14));
            let (a, b, _) = k2_quadratic(w, &q);
            let k = (-b / (2.0 * a)).sqrt();
            let part = DispersionPartials::at(w, k, &q);
            assert!(part.value().norm() + part.d_k().norm() < 1e-10);
        }
        let sh = shestopalov(&q).unwrap();
        assert!((pts[0].re - sh.omega_sh).abs() < q.mu);
        assert!((pts[0] - C64::new(5.13015, 0.46167)).norm() < 1e-5);
        assert!(exchange_branch_points(&q.with_mu(0.0)).is_empty());
        let tiny = exchange_branch_points(&q.with_mu(1e-6));
        assert!((tiny[0] - sh.omega_sh).norm() < 1e-6);
    }

    #[test]
    fn extrema_of_group_velocity() {
        let q = p();
        let e = group_velocity_extrema(&q).unwrap();
        assert!(e.min.velocity < e.max.velocity);
        assert!(e.max.alpha < 0.0 && e.min.alpha > 0.0);
        let h = 1e-5;
        for x in [e.max, e.min] {
            let v = |w: f64| group_velocity(x.branch, re(w), &q).unwrap().re;
            assert!(((v(x.omega + h) - v(x.omega - h)) / (2.0 * h)).abs() < 1e-9);
        }
        // velocities approach the unperturbed ones as the coupling shrinks
        let sh = shestopalov(&q).unwrap();
        let mut last = f64::INFINITY;
        for mu in [0.5, 0.25, 0.125] {
            let e = group_velocity_extrema(&q.with_mu(mu)).unwrap();
            let gap = (e.max.velocity - sh.v1).abs() + (e.min.velocity - sh.v2).abs();
            assert!(gap < last);
            last = gap;
        }
    }

    #[test]
    fn diagram_is_ordered_and_monotone() {
        let q = p();
        let rows = sample_diagram(&q, 3.6, 8.0, 400).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].k1 > w[0].k1 && w[1].k2 > w[0].k2);
        }
        assert!(rows
            .iter()
            .all(|r| r.k1 < r.k2 && r.vg1 > 0.0 && r.vg2 > 0.0));
        assert!(sample_diagram(&q, 3.0, 8.0, 10).is_err());
    }

    #[test]
    fn tracker_follows_the_principal_sheet_in_the_strip() {
        let q = p();
        for b in Branch::BOTH {
            let mut f = BranchFunction::new(b, &q);
            for &w in &[
                C64::new(8.0, 0.1),
                C64::new(5.1, 0.1),
                C64::new(4.0, 0.1),
                C64::new(4.0, -0.1),
            ] {
                let k = f.k_at(w).unwrap();
                assert!((k - branch_k(b, w, &q)).norm() < 1e-10, "{b:?} {w}");
            }
        }
    }

    #[test]
    fn tracker_changes_sheet_around_an_exchange_point() {
        let q = p();
        let e = exchange_branch_points(&q)[0];
        let mut f = BranchFunction::new(Branch::One, &q);
        f.k_at(C64::new(e.re + 1.0, 0.0)).unwrap();
        f.k_at(C64::new(e.re + 1.0, e.im + 0.5)).unwrap();
        f.k_at(C64::new(e.re - 1.0, e.im + 0.5)).unwrap();
        let k = f.k_at(C64::new(e.re - 1.0, 0.0)).unwrap();
        let w = C64::new(e.re - 1.0, 0.0);
        assert!((k - branch_k(Branch::Two, w, &q)).norm() < 1e-10);
    }
}
