//! The acceptance suite: twelve checks of the library against its
//! independent oracles, shared by the `acceptance` test target and the
//! `compare` subcommand.
//!
//! Reports carry measured values and thresholds but no timings, so two runs
//! with the same configuration serialize to identical bytes. Runtime limits
//! still count toward a criterion's verdict.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::qfunc::{q_function, QControls};
use crate::asymptotics::special::{airy_ai, bessel_j0};
use crate::asymptotics::terms::{airy_argument, airy_term, j_term, sp_term, TermKind};
use crate::dispersion::{branch_k, exchange_branch_points, group_velocity, Branch, Extremum};
use crate::error::Result;
use crate::field::assemble_field;
use crate::model::{dispersion_d, DispersionPartials, WaveguideParams, C64};
use crate::oracle::reference::{airy_reference, j0_by_quadrature};
use crate::oracle::{field_modal_integral, j_int_quadrature, scalar_kg_exact, QuadratureControls};
use crate::quadrature::periodic_trapezoid;
use crate::saddle::find_real_saddles;
use crate::waveguide::Waveguide;
use crate::zones::{classify, zone_diagram, ZoneLabel, DEFAULT_S};

/// How a measurement is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    /// Pass when `measured < threshold`.
    Below,
    /// Pass when `measured >= threshold`.
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub what: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Set when a computation failed outright.
    pub error: Option<String>,
}

impl CriterionResult {
    /// One line: id, verdict, name and the worst check.
    pub fn summary_line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let detail = match (
            &self.error,
            self.checks
                .iter()
                .find(|c| !c.passed)
                .or(self.checks.first()),
        ) {
            (Some(e), _) => format!("error: {e}"),
            (None, Some(c)) => {
                let op = match c.comparison {
                    Comparison::Below => "<",
                    Comparison::AtLeast => ">=",
                };
                format!(
                    "{}: {:.3e} (need {op} {:.3e})",
                    c.what, c.measured, c.threshold
                )
            }
            (None, None) => String::new(),
        };
        format!("[{verdict}] {:>2} {:<34} {detail}", self.id, self.name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceReport {
    pub tolerance_scale: f64,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

/// Suite configuration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AcceptanceConfig {
    /// Multiplies every upper bound and divides every lower bound; values
    /// below one tighten the suite.
    pub tolerance_scale: f64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            tolerance_scale: 1.0,
        }
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "uncoupled reduction"),
    (2, "regime counts"),
    (3, "isolated-saddle convergence"),
    (4, "Airy matching"),
    (5, "exchange pulse closed form"),
    (6, "exchange pulse vs modal integral"),
    (7, "special functions"),
    (8, "implicit derivative"),
    (9, "structural identities"),
    (10, "zone monotonicity"),
    (11, "Q self-consistency"),
    (12, "causality and silence"),
];

struct Checks {
    scale: f64,
    list: Vec<Check>,
}

impl Checks {
    fn new(cfg: &AcceptanceConfig) -> Self {
        Self {
            scale: cfg.tolerance_scale,
            list: Vec::new(),
        }
    }

    fn below(&mut self, what: impl Into<String>, measured: f64, bound: f64) {
        let threshold = bound * self.scale;
        self.list.push(Check {
            what: what.into(),
            measured,
            threshold,
            comparison: Comparison::Below,
            passed: measured < threshold,
        });
    }

    fn at_least(&mut self, what: impl Into<String>, measured: f64, bound: f64) {
        let threshold = bound / self.scale;
        self.list.push(Check {
            what: what.into(),
            measured,
            threshold,
            comparison: Comparison::AtLeast,
            passed: measured >= threshold,
        });
    }

    /// Runtime limits are not scaled and record no duration.
    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        let ok = elapsed < limit;
        self.list.push(Check {
            what: format!("{what} within {} s", limit.as_secs()),
            measured: if ok { 0.0 } else { 1.0 },
            threshold: 1.0,
            comparison: Comparison::Below,
            passed: ok,
        });
    }
}

fn norm2(u: [f64; 2]) -> f64 {
    u[0].hypot(u[1])
}

/// Relative error of `assemble_field` against the modal integral, as an
/// RMS over `n` instants spaced by half a time unit from `t` (several
/// carrier periods), so that near-zeros of the interference pattern do not
/// dominate.
fn windowed_error(wg: &Waveguide, v: f64, t: f64, n: usize) -> Result<(f64, ZoneLabel)> {
    let controls = QuadratureControls::default();
    let rows: Vec<(f64, f64, ZoneLabel)> = (0..n)
        .into_par_iter()
        .map(|j| -> Result<_> {
            let tj = t + 0.5 * j as f64;
            let x = v * tj;
            let f = assemble_field(tj, x, wg, DEFAULT_S)?;
            let o = field_modal_integral(tj, x, wg, &controls)?;
            let d = [f.u[0] - o.u[0], f.u[1] - o.u[1]];
            Ok((norm2(d).powi(2), norm2(o.u).powi(2), f.label))
        })
        .collect::<Result<_>>()?;
    let num: f64 = rows.iter().map(|r| r.0).sum();
    let den: f64 = rows.iter().map(|r| r.1).sum();
    Ok(((num / den).sqrt(), rows[0].2.clone()))
}

fn c1_uncoupled(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let start = Instant::now();
    let p = WaveguideParams::preset().with_mu(0.0);
    let wg = Waveguide::new(p)?;
    let controls = QuadratureControls::default();
    let grid: Vec<(f64, f64)> = (0..10)
        .flat_map(|i| {
            (0..10).map(move |j| {
                (
                    5.0 + 35.0 * i as f64 / 9.0,
                    0.1 + 0.8 * (j + 1) as f64 / 11.0,
                )
            })
        })
        .collect();
    let errs: Vec<f64> = grid
        .par_iter()
        .map(|&(t, r)| -> Result<f64> {
            let x = r * p.c1 * t;
            let o = field_modal_integral(t, x, &wg, &controls)?;
            let exact = scalar_kg_exact(t, x, p.c1, p.omega1);
            Ok((o.u[0] - exact).abs() / exact.abs())
        })
        .collect::<Result<_>>()?;
    ch.below(
        "max relative error of u1 on 10x10 grid",
        errs.iter().copied().fold(0.0, f64::max),
        1e-3,
    );
    ch.within("10x10 grid", start.elapsed(), Duration::from_secs(60));
    Ok(ch.list)
}

fn c2_regime_counts(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let start = Instant::now();
    let wg = Waveguide::preset();
    let p = &wg.params;
    let count = |v: f64| find_real_saddles(v, &wg).map(|s| s.len());
    let vs: Vec<f64> = (0..200)
        .map(|i| 1.2 * p.c1 * (i as f64 + 0.5) / 200.0)
        .collect();
    let counts: Vec<usize> = vs.iter().map(|&v| count(v)).collect::<Result<_>>()?;
    // distinct counts, fastest rays first
    let mut pattern: Vec<usize> = Vec::new();
    let mut transitions = Vec::new();
    for i in (0..vs.len()).rev() {
        if pattern.last() != Some(&counts[i]) {
            pattern.push(counts[i]);
            if i + 1 < vs.len() {
                let (mut lo, mut hi) = (vs[i], vs[i + 1]);
                let above = counts[i + 1];
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    if count(mid)? == above {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                transitions.push(0.5 * (lo + hi));
            }
        }
    }
    let ok = pattern == [0, 1, 2, 4, 2];
    ch.below(
        "count pattern {0,1,2,4,2} mismatches",
        if ok { 0.0 } else { 1.0 },
        1.0,
    );
    if ok {
        let ext = wg.structure.extrema.expect("coupled preset");
        let want = [p.c1, p.c2, ext.max.velocity, ext.min.velocity];
        let worst = transitions
            .iter()
            .zip(want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ch.below("max transition offset from {c1, c2, v1', v2'}", worst, 1e-6);
    }
    ch.within("200-value sweep", start.elapsed(), Duration::from_secs(10));
    Ok(ch.list)
}

fn c3_convergence(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::preset();
    let centre = 0.5 * (wg.points.v1 + wg.points.v2);
    for offset in [-0.5, -0.3, 0.35] {
        let v = centre + offset;
        let (e1, l1) = windowed_error(&wg, v, 50.0, 12)?;
        let (e4, l4) = windowed_error(&wg, v, 200.0, 12)?;
        let isolated = |l: &ZoneLabel| l.letters.iter().all(|k| *k == TermKind::SPe);
        ch.below(
            format!("V={v:.4}: interacting pairs present ({l1}, {l4})"),
            if isolated(&l1) && isolated(&l4) {
                0.0
            } else {
                1.0
            },
            1.0,
        );
        ch.at_least(format!("V={v:.4}: error ratio t=50 / t=200"), e1 / e4, 1.5);
    }
    Ok(ch.list)
}

/// `V` at which the Airy argument of `e` equals `z` for time `t`.
fn velocity_for_airy_argument(e: &Extremum, t: f64, z: f64) -> f64 {
    // x depends on V; a few fixed-point passes settle it
    let mut v = e.velocity;
    for _ in 0..50 {
        let s = z * e.alpha.cbrt() / (v * t).powf(2.0 / 3.0);
        v = 1.0 / (1.0 / e.velocity + s);
    }
    v
}

fn c4_airy(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::preset();
    let ext = wg.structure.extrema.expect("coupled preset");
    let (err, label) = windowed_error(&wg, ext.min.velocity, 3200.0, 6)?;
    ch.below(
        "V=v2': zone is Ai with isolated neighbours",
        if label.has(TermKind::Ai) && label.sp_count == 2 {
            0.0
        } else {
            1.0
        },
        1.0,
    );
    ch.below("V=v2', t=3200: Airy + SP vs modal integral", err, 0.15);
    let t = 1e7;
    let mut worst: f64 = 0.0;
    for (e, pair) in [(ext.min, [3u8, 4]), (ext.max, [2, 3])] {
        for z in [-3.5, -4.25, -5.0] {
            let v = velocity_for_airy_argument(&e, t, z);
            let x = v * t;
            debug_assert!((airy_argument(&e, t, x) - z).abs() < 1e-6);
            let mut sum = [C64::new(0.0, 0.0); 2];
            // envelope of the pair: the sum of moduli does not vanish at
            // the interference zeros that the Airy zeros reproduce
            let mut envelope = [0.0; 2];
            for sp in find_real_saddles(v, &wg)?
                .iter()
                .filter(|s| pair.contains(&s.index))
            {
                let term = sp_term(sp, t, x, &wg)?;
                for c in 0..2 {
                    sum[c] += term[c];
                    envelope[c] += term[c].norm();
                }
            }
            let a = airy_term(&e, t, x, &wg)?;
            let rel =
                ((a[0] - sum[0]).norm_sqr() + (a[1] - sum[1]).norm_sqr()).sqrt() / norm2(envelope);
            worst = worst.max(rel);
        }
    }
    ch.below(
        "Airy vs saddle pair relative to its envelope, z in [-5, -3.5], t=1e7",
        worst,
        0.10,
    );
    Ok(ch.list)
}

fn c5_j_closed_form(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let start = Instant::now();
    let wg = Waveguide::preset();
    let (v1, v2) = (wg.points.v1, wg.points.v2);
    let controls = QuadratureControls::default();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let v = v2 + (v1 - v2) * (i as f64 + 0.5) / 10.0;
        let t = 50.0 + 10.0 * i as f64;
        let closed = j_term(t, v * t, &wg)?;
        let quad = j_int_quadrature(t, v * t, &wg, &controls)?;
        let n = (quad[0].norm_sqr() + quad[1].norm_sqr()).sqrt();
        let d = ((closed[0] - quad[0]).norm_sqr() + (closed[1] - quad[1]).norm_sqr()).sqrt();
        worst = worst.max(d / n);
    }
    ch.below("max relative difference at 10 wedge points", worst, 1e-6);
    ch.within("10 points", start.elapsed(), Duration::from_secs(5));
    Ok(ch.list)
}

fn c6_exchange(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::new(WaveguideParams::exchange_preset())?;
    let v = 0.5 * (wg.points.v1 + wg.points.v2);
    let controls = QuadratureControls::default();
    for t in [60.0, 80.0] {
        let x = v * t;
        let label = classify(t, v, &wg, DEFAULT_S)?.label;
        ch.below(
            format!("t={t}: zone is J with two isolated saddles ({label})"),
            if label.to_string() == "J+2SP" {
                0.0
            } else {
                1.0
            },
            1.0,
        );
        let f = assemble_field(t, x, &wg, DEFAULT_S)?;
        let o = field_modal_integral(t, x, &wg, &controls)?;
        let rel = norm2([f.u[0] - o.u[0], f.u[1] - o.u[1]]) / norm2(o.u);
        ch.below(format!("t={t}: J + SP vs modal integral"), rel, 0.10);
    }
    Ok(ch.list)
}

fn c7_special(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let zs: Vec<f64> = (0..1000).map(|i| -20.0 + 40.0 * i as f64 / 999.0).collect();
    let j = zs
        .iter()
        .map(|&z| (bessel_j0(z) - j0_by_quadrature(z)).abs())
        .fold(0.0, f64::max);
    let refs = airy_reference(&zs);
    let a = zs
        .iter()
        .zip(&refs)
        .map(|(&z, r)| (airy_ai(z) - r).abs())
        .fold(0.0, f64::max);
    ch.below("J0 max absolute error on [-20, 20]", j, 1e-9);
    ch.below("Ai max absolute error on [-20, 20]", a, 1e-9);
    Ok(ch.list)
}

fn c8_implicit(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::preset();
    let p = &wg.params;
    let mut worst: f64 = 0.0;
    for b in Branch::BOTH {
        let lo = b.cutoff(p) * 1.05;
        let hi = 3.0 * wg.points.omega_sh;
        for i in 0..50 {
            let w = lo + (hi - lo) * i as f64 / 49.0;
            let h = 1e-5 * w;
            let k = |w: f64| branch_k(b, C64::new(w, 0.0), p).re;
            let fd = 2.0 * h / (k(w + h) - k(w - h));
            let vg = group_velocity(b, C64::new(w, 0.0), p)?.re;
            worst = worst.max((vg - fd).abs() / vg.abs());
        }
    }
    ch.below("max relative difference at 100 frequencies", worst, 1e-6);
    Ok(ch.list)
}

fn c9_structure(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::preset();
    let p = &wg.params;
    let (w, k) = (wg.points.omega_sh, wg.points.k_sh);
    let d = dispersion_d(C64::new(w, 0.0), C64::new(k, 0.0), p);
    // machine precision relative to the size of the products in D
    let scale = w.powi(4).max(p.mu * p.mu);
    ch.below(
        "|D(ω_sh, k_sh) + μ²| / ω_sh⁴",
        (d + p.mu * p.mu).norm() / scale,
        64.0 * f64::EPSILON,
    );
    let cut = wg
        .structure
        .cutoffs
        .iter()
        .map(|&c| dispersion_d(C64::new(c, 0.0), C64::new(0.0, 0.0), p).norm())
        .fold(0.0, f64::max);
    ch.below("max |D(ω_c, 0)| over cut-offs", cut, 1e-12);
    let mut ex: f64 = 0.0;
    for wb in exchange_branch_points(p) {
        // the branch point is a double root in k: pick the nearest root
        let kb = crate::dispersion::roots_k(wb, p)
            .into_iter()
            .min_by(|a, b| {
                dispersion_partial_norm(wb, *a, p).total_cmp(&dispersion_partial_norm(wb, *b, p))
            })
            .expect("four roots");
        ex = ex.max(dispersion_partial_norm(wb, kb, p));
    }
    ch.below("max |D| + |∂kD| at exchange points", ex, 1e-10);
    Ok(ch.list)
}

fn dispersion_partial_norm(w: C64, k: C64, p: &WaveguideParams) -> f64 {
    let d = DispersionPartials::at(w, k, p);
    d.value().norm() + d.d_k().norm()
}

fn c10_monotonicity(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let mut violations = 0usize;
    for params in [
        WaveguideParams::preset(),
        WaveguideParams::exchange_preset(),
    ] {
        let wg = Waveguide::new(params)?;
        let d = zone_diagram(&wg, (1.0, 500.0), (0.2, 2.2), (200, 25), DEFAULT_S)?;
        let isolated = |l: &ZoneLabel| l.letters.iter().all(|k| *k == TermKind::SPe);
        for row in &d.labels {
            if let Some(first) = row.iter().position(isolated) {
                violations += row[first..].iter().filter(|l| !isolated(l)).count();
            }
        }
    }
    ch.below(
        "cells that lose isolation at larger t (50 V x 200 t)",
        violations as f64,
        1.0,
    );
    Ok(ch.list)
}

/// `I0(y) = π⁻¹ ∫₀^π cosh(y cos θ) dθ`.
fn i0_by_quadrature(y: f64) -> f64 {
    let (v, _) = periodic_trapezoid(
        |th| C64::new((y * th.cos()).cosh(), 0.0),
        0.0,
        2.0 * PI,
        1e-15,
        14,
    )
    .expect("smooth periodic integrand");
    v.re / (2.0 * PI)
}

fn c11_q(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let controls = QControls::default();
    let mut halving: f64 = 0.0;
    for (beta, z) in [(0.1, 0.0), (0.3, 0.5), (0.5, -0.2), (1.0, 1.5), (2.0, -1.0)] {
        let q = q_function(beta, z, controls)?;
        halving = halving.max(q.cut_change).max(q.line_change.unwrap_or(0.0));
    }
    ch.below("step-halving change", halving, 1e-8);
    let mut bessel: f64 = 0.0;
    for z in [-0.9, -0.5, 0.0, 0.5, 0.9, 1.5, 3.0] {
        let q = q_function(0.0, z, controls)?;
        let w: f64 = 1.0 - z * z;
        let j = if w >= 0.0 {
            j0_by_quadrature(w.sqrt())
        } else {
            i0_by_quadrature((-w).sqrt())
        };
        let want = C64::new(0.0, -2.0 * PI * j);
        bessel = bessel.max((q.cut_part - want).norm() / want.norm());
    }
    ch.below("β=0 cut loop vs Bessel identity", bessel, 1e-6);
    Ok(ch.list)
}

fn c12_silence(cfg: &AcceptanceConfig) -> Result<Vec<Check>> {
    let mut ch = Checks::new(cfg);
    let wg = Waveguide::preset();
    let c1 = wg.params.c1;
    let controls = QuadratureControls::default();
    let times = [5.0, 10.0, 20.0, 40.0, 80.0];
    let probe = |t: f64, x: f64| field_modal_integral(t, x, &wg, &controls).map(|m| norm2(m.u));
    // local scale: largest field inside the cone at the same |t|
    let scales: Vec<f64> = times
        .par_iter()
        .map(|&t| -> Result<f64> {
            let mut m: f64 = 0.0;
            for r in [0.3, 0.6, 0.9] {
                m = m.max(probe(t, r * c1 * t)?);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, f64, bool)> = (0..5)
        .flat_map(|i| (0..5).flat_map(move |j| [(i, j, true), (i, j, false)]))
        .map(|(i, j, past)| (i, [0.2, 0.5, 1.0, 1.5, 3.0][j], past))
        .collect();
    let ratios: Vec<(bool, f64)> = cells
        .par_iter()
        .map(|&(i, r, past)| -> Result<(bool, f64)> {
            let t = times[i];
            let u = if past {
                probe(-t, r * c1 * t)?
            } else {
                probe(t, (1.05 + 0.4 * r) * c1 * t)?
            };
            Ok((past, u / scales[i]))
        })
        .collect::<Result<_>>()?;
    let worst = |p: bool| {
        ratios
            .iter()
            .filter(|r| r.0 == p)
            .map(|r| r.1)
            .fold(0.0, f64::max)
    };
    ch.below("max |u| / local scale for t < 0", worst(true), 1e-6);
    ch.below("max |u| / local scale for V > c1", worst(false), 1e-6);
    Ok(ch.list)
}

/// Runs criterion `id` (1 to 12).
pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let outcome = match id {
        1 => c1_uncoupled(cfg),
        2 => c2_regime_counts(cfg),
        3 => c3_convergence(cfg),
        4 => c4_airy(cfg),
        5 => c5_j_closed_form(cfg),
        6 => c6_exchange(cfg),
        7 => c7_special(cfg),
        8 => c8_implicit(cfg),
        9 => c9_structure(cfg),
        10 => c10_monotonicity(cfg),
        11 => c11_q(cfg),
        12 => c12_silence(cfg),
        _ => Err(crate::error::Error::Config(format!(
            "no acceptance criterion {id}"
        ))),
    };
    match outcome {
        Ok(checks) => CriterionResult {
            id,
            name,
            passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
            checks,
            error: None,
        },
        Err(e) => CriterionResult {
            id,
            name,
            passed: false,
            checks: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Runs every criterion in order.
pub fn run_all(cfg: &AcceptanceConfig) -> AcceptanceReport {
    let criteria: Vec<CriterionResult> = CRITERIA.iter().map(|c| run_criterion(c.0, cfg)).collect();
    AcceptanceReport {
        tolerance_scale: cfg.tolerance_scale,
        all_passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}
