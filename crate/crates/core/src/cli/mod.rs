//! Command-line front end: argument parsing, run configuration and the five
//! subcommands. Every file written starts with a header that echoes the
//! full configuration.

pub mod svg;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::acceptance::{run_criterion, AcceptanceConfig, AcceptanceReport, CRITERIA};
use crate::asymptotics::terms::TermKind;
use crate::dispersion::{sample_diagram, Branch};
use crate::error::{Error, Result};
use crate::field::{assemble_field_with, FieldValue};
use crate::model::WaveguideParams;
use crate::oracle::{
    field_modal_integral, scalar_kg_exact, scalar_kg_far, scalar_z, QuadratureControls,
};
use crate::waveguide::Waveguide;
use crate::zones::{scalar_zone_classify, zone_diagram, ScalarZoneLabel, ZoneDiagram};
use svg::{padded_range, Frame, Svg};

#[derive(Debug, Parser)]
#[command(
    name = "kgzones",
    version,
    about = "Transient fields and zone diagrams of a coupled Klein-Gordon waveguide"
)]
pub struct Cli {
    /// Worker threads for per-point computations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Real dispersion diagram and group velocities.
    Dispersion(DispersionArgs),
    /// Zone diagram of the (t, V) plane.
    Zones(ZonesArgs),
    /// Asymptotic field against the modal integral.
    Field(FieldArgs),
    /// Run the acceptance suite and report per-criterion results.
    Compare(CompareArgs),
    /// Exact and far-field solution of the scalar Klein-Gordon equation.
    Scalar(ScalarArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Default,
    Exchange,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// JSON file with c1, c2, omega1, omega2, mu and optionally f1, f2.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Built-in parameter set used when no file is given.
    #[arg(long, value_enum, default_value = "default")]
    pub preset: Preset,
    /// Phase-separation threshold.
    #[arg(long = "S", default_value_t = 3.0)]
    pub s: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Ranges {
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub v_min: Option<f64>,
    #[arg(long)]
    pub v_max: Option<f64>,
    /// Samples as `NxM`: N along t, M along V.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Drop the coupling (μ = 0) to show the crossing unperturbed lines.
    #[arg(long)]
    pub mu0: bool,
    #[arg(long)]
    pub omega_min: Option<f64>,
    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZonesArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ranges: Ranges,
    /// Diagram of the scalar equation for layer 1 instead.
    #[arg(long)]
    pub scalar: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ranges: Ranges,
    /// Skip the modal integral.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Multiplies the upper tolerances (divides lower bounds); below one
    /// tightens the suite.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// Comma-separated criterion numbers; all when absent.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Option<Vec<u8>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScalarArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ranges: Ranges,
    /// Wave speed; layer 1 of the parameter set when absent.
    #[arg(long)]
    pub c: Option<f64>,
    /// Cut-off frequency; layer 1 of the parameter set when absent.
    #[arg(long)]
    pub omega: Option<f64>,
}

/// Validated, fully resolved configuration of one run. Serialized into the
/// header of every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: WaveguideParams,
    pub s: f64,
    pub t_range: (f64, f64),
    pub v_range: (f64, f64),
    pub grid: (usize, usize),
    pub format: Format,
    pub options: BTreeMap<&'static str, serde_json::Value>,
}

impl RunConfig {
    fn header_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    fn csv_header(&self) -> String {
        format!(
            "# kgzones {}\n# config: {}\n",
            self.command,
            self.header_json()
        )
    }
}

pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || {
        Error::Config(format!(
            "grid `{s}` is not of the form NxM with positive N, M"
        ))
    };
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: usize = b.trim().parse().map_err(|_| bad())?;
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

fn load_params(c: &Common) -> Result<WaveguideParams> {
    match &c.params {
        Some(path) => WaveguideParams::load(path).map_err(|e| match e {
            Error::Json(j) => Error::Config(format!("{}: {j}", path.display())),
            other => other,
        }),
        None => Ok(match c.preset {
            Preset::Default => WaveguideParams::preset(),
            Preset::Exchange => WaveguideParams::exchange_preset(),
        }),
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "--S must be positive and finite (got {s})"
        )))
    }
}

/// `(t range, V range, grid)` after applying command-line overrides.
type Window = ((f64, f64), (f64, f64), (usize, usize));

fn resolve_ranges(
    r: &Ranges,
    t: (f64, f64),
    v: (f64, f64),
    grid: (usize, usize),
) -> Result<Window> {
    let t = (r.t_min.unwrap_or(t.0), r.t_max.unwrap_or(t.1));
    let v = (r.v_min.unwrap_or(v.0), r.v_max.unwrap_or(v.1));
    let grid = match &r.grid {
        Some(g) => parse_grid(g)?,
        None => grid,
    };
    for (name, (lo, hi)) in [("t", t), ("V", v)] {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
            return Err(Error::Config(format!(
                "{name} range [{lo}, {hi}] must be positive and ordered"
            )));
        }
    }
    Ok((t, v, grid))
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_doc(cfg: &RunConfig, body: serde_json::Value) -> String {
    let doc = serde_json::json!({ "config": cfg, "data": body });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn zone_colour(k: Option<TermKind>) -> &'static str {
    match k {
        None => "#f0f0f0",
        Some(TermKind::SP) => "#9ecae1",
        Some(TermKind::SPe) => "#c6dbef",
        Some(TermKind::Ai) => "#fdae6b",
        Some(TermKind::J) => "#a1d99b",
        Some(TermKind::Q) => "#bcbddc",
        Some(TermKind::B) => "#fb6a4a",
    }
}

fn scalar_colour(l: ScalarZoneLabel) -> &'static str {
    match l {
        ScalarZoneLabel::Zero => "#f0f0f0",
        ScalarZoneLabel::Far => "#9ecae1",
        ScalarZoneLabel::Bessel => "#fb6a4a",
        ScalarZoneLabel::Near => "#a1d99b",
    }
}

/// Cell map over uniform t and V axes, with one text label per distinct
/// cell label placed at the member cell nearest the label's centroid.
fn cell_map_svg(
    cfg: &RunConfig,
    ts: &[f64],
    vs: &[f64],
    cells: &[Vec<(String, &'static str)>],
    lines: &[(Vec<(f64, f64)>, &str)],
) -> String {
    let mut doc = Svg::new(820.0, 560.0);
    let f = Frame {
        left: 80.0,
        top: 30.0,
        width: 700.0,
        height: 460.0,
        x_range: (ts[0], *ts.last().expect("non-empty")),
        y_range: (vs[0], *vs.last().expect("non-empty")),
    };
    let f = Frame {
        x_range: if f.x_range.0 == f.x_range.1 {
            (f.x_range.0 - 0.5, f.x_range.1 + 0.5)
        } else {
            f.x_range
        },
        y_range: if f.y_range.0 == f.y_range.1 {
            (f.y_range.0 - 0.5, f.y_range.1 + 0.5)
        } else {
            f.y_range
        },
        ..f
    };
    let cw = f.width / ts.len() as f64;
    let chh = f.height / vs.len() as f64;
    let mut members: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, row) in cells.iter().enumerate() {
        for (j, (label, colour)) in row.iter().enumerate() {
            let x = f.left + j as f64 * cw;
            let y = f.top + f.height - (i + 1) as f64 * chh;
            doc.rect(x, y, cw + 0.3, chh + 0.3, colour);
            members.entry(label.as_str()).or_default().push((i, j));
        }
    }
    for (pts, colour) in lines {
        doc.polyline(&f, pts, colour, 1.5);
    }
    for (label, cells) in &members {
        let n = cells.len() as f64;
        if n < 4.0 {
            continue;
        }
        let ci = cells.iter().map(|c| c.0 as f64).sum::<f64>() / n;
        let cj = cells.iter().map(|c| c.1 as f64).sum::<f64>() / n;
        let &(i, j) = cells
            .iter()
            .min_by(|a, b| {
                let da = (a.0 as f64 - ci).powi(2) + (a.1 as f64 - cj).powi(2);
                let db = (b.0 as f64 - ci).powi(2) + (b.1 as f64 - cj).powi(2);
                da.total_cmp(&db)
            })
            .expect("non-empty");
        let x = f.left + (j as f64 + 0.5) * cw;
        let y = f.top + f.height - (i as f64 + 0.5) * chh;
        doc.text(x, y + 4.0, label, 12.0, "middle");
    }
    doc.axes(&f, "t", "V = x/t");
    doc.finish(&cfg.header_json())
}

fn cmd_dispersion(a: &DispersionArgs) -> Result<String> {
    check_s(a.common.s)?;
    let mut params = load_params(&a.common)?;
    if a.mu0 {
        params = params.with_mu(0.0);
    }
    let wg = Waveguide::new(params)?;
    let upper = Branch::One.cutoff(&params).max(Branch::Two.cutoff(&params));
    let lo = a.omega_min.unwrap_or(upper * 1.02);
    let hi = a.omega_max.unwrap_or(3.0 * wg.points.omega_sh);
    let rows = sample_diagram(&params, lo, hi, a.samples)?;
    let mut options = BTreeMap::new();
    options.insert("mu0", serde_json::json!(a.mu0));
    options.insert("omega_range", serde_json::json!([lo, hi]));
    options.insert("samples", serde_json::json!(a.samples));
    let cfg = RunConfig {
        command: "dispersion",
        params,
        s: a.common.s,
        t_range: (0.0, 0.0),
        v_range: (0.0, 0.0),
        grid: (a.samples, 1),
        format: a.common.format,
        options,
    };
    Ok(match a.common.format {
        Format::Csv => {
            let mut s = cfg.csv_header();
            s.push_str("omega,k1,k2,vg1,vg2\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    r.omega, r.k1, r.k2, r.vg1, r.vg2
                ));
            }
            s
        }
        Format::Json => json_doc(
            &cfg,
            serde_json::json!({ "points": wg.points, "structure": wg.structure, "samples": rows }),
        ),
        Format::Svg => {
            let mut doc = Svg::new(1000.0, 460.0);
            let ws = padded_range(rows.iter().map(|r| r.omega));
            let left = Frame {
                left: 80.0,
                top: 30.0,
                width: 380.0,
                height: 360.0,
                x_range: padded_range(rows.iter().flat_map(|r| [r.k1, r.k2])),
                y_range: ws,
            };
            let right = Frame {
                left: 580.0,
                x_range: ws,
                y_range: padded_range(rows.iter().flat_map(|r| [r.vg1, r.vg2])),
                ..left
            };
            let k1: Vec<(f64, f64)> = rows.iter().map(|r| (r.k1, r.omega)).collect();
            let k2: Vec<(f64, f64)> = rows.iter().map(|r| (r.k2, r.omega)).collect();
            let v1: Vec<(f64, f64)> = rows.iter().map(|r| (r.omega, r.vg1)).collect();
            let v2: Vec<(f64, f64)> = rows.iter().map(|r| (r.omega, r.vg2)).collect();
            doc.polyline(&left, &k1, "#1f77b4", 1.5);
            doc.polyline(&left, &k2, "#d62728", 1.5);
            doc.polyline(&right, &v1, "#1f77b4", 1.5);
            doc.polyline(&right, &v2, "#d62728", 1.5);
            doc.axes(&left, "k", "omega");
            doc.axes(&right, "omega", "group velocity");
            doc.text(
                left.left + 10.0,
                20.0,
                "branch 1 (blue), branch 2 (red)",
                12.0,
                "start",
            );
            doc.finish(&cfg.header_json())
        }
    })
}

fn cmd_zones(a: &ZonesArgs) -> Result<String> {
    check_s(a.common.s)?;
    let params = load_params(&a.common)?;
    let (t_range, v_range, grid) = resolve_ranges(&a.ranges, (1.0, 500.0), (0.5, 2.5), (200, 100))?;
    let mut options = BTreeMap::new();
    options.insert("scalar", serde_json::json!(a.scalar));
    let cfg = RunConfig {
        command: "zones",
        params,
        s: a.common.s,
        t_range,
        v_range,
        grid,
        format: a.common.format,
        options,
    };
    if a.scalar {
        return scalar_zones(&cfg, &params);
    }
    let wg = Waveguide::new(params)?;
    let d = zone_diagram(&wg, t_range, v_range, grid, cfg.s)?;
    Ok(match cfg.format {
        Format::Csv => cfg.csv_header() + &d.to_csv(),
        Format::Json => json_doc(&cfg, d.to_json()),
        Format::Svg => zones_svg(&cfg, &d),
    })
}

fn zones_svg(cfg: &RunConfig, d: &ZoneDiagram) -> String {
    let cells: Vec<Vec<(String, &'static str)>> = d
        .labels
        .iter()
        .map(|row| {
            row.iter()
                .map(|l| (l.to_string(), zone_colour(l.dominant())))
                .collect()
        })
        .collect();
    let lines: Vec<(Vec<(f64, f64)>, &str)> = d
        .boundaries
        .iter()
        .flat_map(|b| b.polylines.iter().map(|p| (p.clone(), "black")))
        .collect();
    cell_map_svg(cfg, &d.t, &d.v, &cells, &lines)
}

fn scalar_zones(cfg: &RunConfig, p: &WaveguideParams) -> Result<String> {
    let ts = axis(cfg.t_range.0, cfg.t_range.1, cfg.grid.0);
    let vs = axis(cfg.v_range.0, cfg.v_range.1, cfg.grid.1);
    let labels: Vec<Vec<ScalarZoneLabel>> = vs
        .iter()
        .map(|&v| {
            ts.iter()
                .map(|&t| scalar_zone_classify(t, v * t, p.c1, p.omega1, cfg.s))
                .collect()
        })
        .collect();
    Ok(match cfg.format {
        Format::Csv => {
            let mut s = cfg.csv_header();
            s.push_str("t,V,label\n");
            for (i, row) in labels.iter().enumerate() {
                for (j, l) in row.iter().enumerate() {
                    s.push_str(&format!("{:.16e},{:.16e},{}\n", ts[j], vs[i], l.name()));
                }
            }
            s
        }
        Format::Json => {
            let cells: Vec<serde_json::Value> = labels
                .iter()
                .enumerate()
                .flat_map(|(i, row)| {
                    let (ts, vs) = (&ts, &vs);
                    row.iter()
                        .enumerate()
                        .map(move |(j, l)| serde_json::json!({ "t": ts[j], "V": vs[i], "label": l.name() }))
                })
                .collect();
            json_doc(
                cfg,
                serde_json::json!({ "cells": cells, "parents": { "far": "bessel", "near": "bessel", "bessel": null } }),
            )
        }
        Format::Svg => {
            let cells: Vec<Vec<(String, &'static str)>> = labels
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|l| (l.name().to_string(), scalar_colour(*l)))
                        .collect()
                })
                .collect();
            // z = S and z = 1/S: t²(1 - V²/c²) = (z/Ω)²
            let curve = |z: f64| -> Vec<(f64, f64)> {
                vs.iter()
                    .filter(|&&v| v < p.c1)
                    .map(|&v| (z / p.omega1 / (1.0 - v * v / (p.c1 * p.c1)).sqrt(), v))
                    .filter(|&(t, _)| t >= cfg.t_range.0 && t <= cfg.t_range.1)
                    .collect()
            };
            let lines = vec![(curve(cfg.s), "black"), (curve(1.0 / cfg.s), "black")];
            cell_map_svg(cfg, &ts, &vs, &cells, &lines)
        }
    })
}

#[derive(Debug, Serialize)]
struct FieldRow {
    t: f64,
    x: f64,
    v: f64,
    value: Option<FieldValue>,
    oracle: Option<[f64; 2]>,
    oracle_error_estimate: Option<f64>,
    status: String,
}

fn cmd_field(a: &FieldArgs) -> Result<(String, bool)> {
    check_s(a.common.s)?;
    let params = load_params(&a.common)?;
    let (t_range, v_range, grid) = resolve_ranges(&a.ranges, (100.0, 100.0), (0.5, 2.5), (1, 50))?;
    let mut options = BTreeMap::new();
    options.insert("oracle", serde_json::json!(!a.no_oracle));
    let cfg = RunConfig {
        command: "field",
        params,
        s: a.common.s,
        t_range,
        v_range,
        grid,
        format: a.common.format,
        options,
    };
    let wg = Waveguide::new(params)?;
    let controls = QuadratureControls::default();
    let ts = axis(t_range.0, t_range.1, grid.0);
    let vs = axis(v_range.0, v_range.1, grid.1);
    let points: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| vs.iter().map(move |&v| (t, v)))
        .collect();
    let rows: Vec<FieldRow> = points
        .par_iter()
        .map(|&(t, v)| {
            let x = v * t;
            let mut status = Vec::new();
            let value = assemble_field_with(t, x, &wg, cfg.s, &controls)
                .map_err(|e| status.push(format!("asymptotic: {e}")))
                .ok();
            let (oracle, est) = if a.no_oracle {
                (None, None)
            } else {
                match field_modal_integral(t, x, &wg, &controls) {
                    Ok(m) => (Some(m.u), Some(m.error_estimate)),
                    Err(e) => {
                        status.push(format!("oracle: {e}"));
                        (None, None)
                    }
                }
            };
            FieldRow {
                t,
                x,
                v,
                value,
                oracle,
                oracle_error_estimate: est,
                status: if status.is_empty() {
                    "ok".into()
                } else {
                    status.join("; ")
                },
            }
        })
        .collect();
    let ok = rows.iter().all(|r| r.status == "ok");
    let text = match cfg.format {
        Format::Csv => {
            let mut s = cfg.csv_header();
            s.push_str("t,x,V,label,provenance,u1,u2,u1_oracle,u2_oracle,terms,status\n");
            let num = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
            for r in &rows {
                let (label, prov, u, terms) = match &r.value {
                    Some(f) => (
                        f.label.to_string(),
                        format!("{:?}", f.provenance),
                        [Some(f.u[0]), Some(f.u[1])],
                        f.terms
                            .iter()
                            .map(|d| {
                                let ids: Vec<String> =
                                    d.saddles.iter().map(|i| i.to_string()).collect();
                                format!("{}({})", d.kind.letter(), ids.join(" "))
                            })
                            .collect::<Vec<_>>()
                            .join(" "),
                    ),
                    None => (String::new(), String::new(), [None, None], String::new()),
                };
                s.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{label},{prov},{},{},{},{},{terms},{}\n",
                    r.t,
                    r.x,
                    r.v,
                    num(u[0]),
                    num(u[1]),
                    num(r.oracle.map(|o| o[0])),
                    num(r.oracle.map(|o| o[1])),
                    r.status.replace(',', ";")
                ));
            }
            s
        }
        Format::Json => json_doc(&cfg, serde_json::to_value(&rows)?),
        Format::Svg => {
            // component 2 against V for the first time value
            let first: Vec<&FieldRow> = rows.iter().filter(|r| r.t == ts[0]).collect();
            let asym: Vec<(f64, f64)> = first
                .iter()
                .filter_map(|r| r.value.as_ref().map(|f| (r.v, f.u[1])))
                .collect();
            let orac: Vec<(f64, f64)> = first
                .iter()
                .filter_map(|r| r.oracle.map(|o| (r.v, o[1])))
                .collect();
            let asym1: Vec<(f64, f64)> = first
                .iter()
                .filter_map(|r| r.value.as_ref().map(|f| (r.v, f.u[0])))
                .collect();
            let orac1: Vec<(f64, f64)> = first
                .iter()
                .filter_map(|r| r.oracle.map(|o| (r.v, o[0])))
                .collect();
            let mut doc = Svg::new(1000.0, 460.0);
            let x_range = padded_range(first.iter().map(|r| r.v));
            let left = Frame {
                left: 80.0,
                top: 30.0,
                width: 380.0,
                height: 360.0,
                x_range,
                y_range: padded_range(asym1.iter().chain(&orac1).map(|p| p.1)),
            };
            let right = Frame {
                left: 580.0,
                y_range: padded_range(asym.iter().chain(&orac).map(|p| p.1)),
                ..left
            };
            doc.polyline(&left, &orac1, "black", 1.5);
            doc.polyline(&left, &asym1, "#d62728", 1.0);
            doc.polyline(&right, &orac, "black", 1.5);
            doc.polyline(&right, &asym, "#d62728", 1.0);
            doc.axes(&left, "V", "u1");
            doc.axes(&right, "V", "u2");
            doc.text(
                80.0,
                20.0,
                &format!("t = {}: modal integral (black), asymptotics (red)", ts[0]),
                12.0,
                "start",
            );
            doc.finish(&cfg.header_json())
        }
    };
    Ok((text, ok))
}

fn cmd_scalar(a: &ScalarArgs) -> Result<String> {
    check_s(a.common.s)?;
    let params = load_params(&a.common)?;
    let c = a.c.unwrap_or(params.c1);
    let omega = a.omega.unwrap_or(params.omega1);
    if !(c > 0.0 && omega > 0.0 && c.is_finite() && omega.is_finite()) {
        return Err(Error::Config(format!(
            "--c and --omega must be positive (got {c}, {omega})"
        )));
    }
    let (t_range, v_range, grid) =
        resolve_ranges(&a.ranges, (20.0, 20.0), (0.05 * c, 1.2 * c), (1, 200))?;
    let mut options = BTreeMap::new();
    options.insert("c", serde_json::json!(c));
    options.insert("omega", serde_json::json!(omega));
    let cfg = RunConfig {
        command: "scalar",
        params,
        s: a.common.s,
        t_range,
        v_range,
        grid,
        format: a.common.format,
        options,
    };
    let ts = axis(t_range.0, t_range.1, grid.0);
    let vs = axis(v_range.0, v_range.1, grid.1);
    #[derive(Serialize)]
    struct Row {
        t: f64,
        x: f64,
        z: Option<f64>,
        label: &'static str,
        exact: f64,
        far: Option<f64>,
    }
    let rows: Vec<Row> = ts
        .iter()
        .flat_map(|&t| vs.iter().map(move |&v| (t, v * t)))
        .map(|(t, x)| Row {
            t,
            x,
            z: scalar_z(t, x, c, omega),
            label: scalar_zone_classify(t, x, c, omega, cfg.s).name(),
            exact: scalar_kg_exact(t, x, c, omega),
            far: scalar_kg_far(t, x, c, omega, cfg.s).ok(),
        })
        .collect();
    Ok(match cfg.format {
        Format::Csv => {
            let mut s = cfg.csv_header();
            s.push_str("t,x,z,label,exact,far\n");
            let num = |v: Option<f64>| v.map(|v| format!("{v:.16e}")).unwrap_or_default();
            for r in &rows {
                s.push_str(&format!(
                    "{:.16e},{:.16e},{},{},{:.16e},{}\n",
                    r.t,
                    r.x,
                    num(r.z),
                    r.label,
                    r.exact,
                    num(r.far)
                ));
            }
            s
        }
        Format::Json => json_doc(&cfg, serde_json::to_value(&rows)?),
        Format::Svg => {
            let first: Vec<&Row> = rows.iter().filter(|r| r.t == ts[0]).collect();
            let exact: Vec<(f64, f64)> = first.iter().map(|r| (r.x, r.exact)).collect();
            let far: Vec<(f64, f64)> = first
                .iter()
                .filter_map(|r| r.far.map(|f| (r.x, f)))
                .collect();
            let f = Frame {
                left: 80.0,
                top: 30.0,
                width: 700.0,
                height: 400.0,
                x_range: padded_range(exact.iter().map(|p| p.0)),
                y_range: padded_range(exact.iter().map(|p| p.1)),
            };
            let mut doc = Svg::new(820.0, 500.0);
            doc.polyline(&f, &exact, "black", 1.5);
            doc.polyline(&f, &far, "#d62728", 1.0);
            doc.axes(&f, "x", "u");
            doc.text(
                80.0,
                20.0,
                &format!("t = {}: exact (black), far-field form (red)", ts[0]),
                12.0,
                "start",
            );
            doc.finish(&cfg.header_json())
        }
    })
}

fn cmd_compare(a: &CompareArgs) -> Result<(String, bool)> {
    if !(a.tol_scale.is_finite() && a.tol_scale > 0.0) {
        return Err(Error::Config(format!(
            "--tol-scale must be positive (got {})",
            a.tol_scale
        )));
    }
    let ids: Vec<u8> = a
        .criteria
        .clone()
        .unwrap_or_else(|| CRITERIA.iter().map(|c| c.0).collect());
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.iter().any(|c| c.0 == **i)) {
        return Err(Error::Config(format!("no acceptance criterion {bad}")));
    }
    let cfg = AcceptanceConfig {
        tolerance_scale: a.tol_scale,
    };
    let criteria: Vec<_> = ids.iter().map(|&i| run_criterion(i, &cfg)).collect();
    for c in &criteria {
        eprintln!("{}", c.summary_line());
    }
    let report = AcceptanceReport {
        tolerance_scale: a.tol_scale,
        all_passed: criteria.iter().all(|c| c.passed),
        criteria,
    };
    let text =
        serde_json::to_string_pretty(&serde_json::json!({ "config": a, "report": report }))? + "\n";
    Ok((text, report.all_passed))
}

/// Runs a parsed command line; the returned flag is false when some
/// computation failed or a criterion did not pass.
pub fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match &cli.command {
        Command::Dispersion(a) => emit(&a.common.out, &cmd_dispersion(a)?).map(|_| true),
        Command::Zones(a) => emit(&a.common.out, &cmd_zones(a)?).map(|_| true),
        Command::Field(a) => {
            let (text, ok) = cmd_field(a)?;
            emit(&a.common.out, &text)?;
            Ok(ok)
        }
        Command::Compare(a) => {
            let (text, ok) = cmd_compare(a)?;
            emit(&a.out, &text)?;
            Ok(ok)
        }
        Command::Scalar(a) => emit(&a.common.out, &cmd_scalar(a)?).map(|_| true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("200x100").unwrap(), (200, 100));
        assert_eq!(parse_grid("3X4").unwrap(), (3, 4));
        for bad in ["", "3", "0x4", "ax4", "3x-1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_are_recognised() {
        let cli = Cli::try_parse_from([
            "kgzones",
            "--threads",
            "2",
            "zones",
            "--S",
            "0.5",
            "--t-min",
            "1",
            "--t-max",
            "50",
            "--v-min",
            "0.5",
            "--v-max",
            "2",
            "--grid",
            "10x5",
            "--format",
            "svg",
            "--scalar",
        ])
        .unwrap();
        match cli.command {
            Command::Zones(z) => {
                assert!(z.scalar);
                assert_eq!(z.common.s, 0.5);
                assert_eq!(z.common.format, Format::Svg);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
