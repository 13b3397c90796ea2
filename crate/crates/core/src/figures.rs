//! Data series behind the published figures, and the detector-zone map.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{default_time_grid, evolve, with_eta0};
use crate::entanglement::{self, eta_star, log_grid};
use crate::error::{Error, Result};
use crate::oracle::{build_grid, DensityModel};
use crate::params::{DerivedParams, Mode, SystemParams};
use crate::quad::golden_section_min;
use crate::table::{Cell, Table};
use crate::wavepackets::{cm_width, linspace, rel_profile_unit, rel_shape, rel_width, CmPacket};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
        })
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Light-to-heavy mass ratio of the width and entanglement figures.
pub const FIG34_MASS_RATIO: f64 = 0.1;

/// Tables for one figure. Each table's `name` is its file stem.
pub fn fig_profiles(which: FigureId) -> Result<Vec<Table>> {
    match which {
        FigureId::Fig1a => Ok(vec![profile_table("fig1_a", 0.01, -10.0, 3.0, 1301)?]),
        FigureId::Fig1b => Ok(vec![profile_table("fig1_b", 20.0, -80.0, 80.0, 1601)?]),
        FigureId::Fig2 => Ok(vec![fig2()?]),
        FigureId::Fig3 => Ok(vec![fig3()?]),
        FigureId::Fig4 => Ok(vec![fig4()?]),
        FigureId::Fig5 => Ok(vec![trace_table("fig5_trace", 0.05)?]),
        FigureId::Fig6 => Ok(vec![trace_table("fig6_trace", 0.5)?]),
        FigureId::Fig7 => fig7(),
        FigureId::Fig8 => fig8(),
    }
}

/// Profile table with columns (rho, zeta, density).
pub fn profile_table(name: &str, zeta: f64, lo: f64, hi: f64, n: usize) -> Result<Table> {
    let grid = linspace(lo, hi, n);
    let values = grid
        .par_iter()
        .map(|&rho| rel_profile_unit(rho, zeta))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        name,
        format!("relative-packet radial profile at zeta = {zeta}, unit area in rho"),
        &[
            ("rho", "(r_rel - v t) / dr_rel0"),
            ("zeta", "t / (mu dr_rel0^2)"),
            ("density", "1 (per unit rho)"),
        ],
    );
    for (rho, d) in grid.iter().zip(values) {
        t.push(vec![(*rho).into(), zeta.into(), d.into()]);
    }
    Ok(t)
}

fn fig2() -> Result<Table> {
    // m_e/m_i = 0.2, eta = 0.5, gamma t = 4
    let g = build_grid(DensityModel::GaussianExponential, 0.5, 0.2, 1.0, 4.0, 64)?;
    let xe = linspace(-4.0, 10.0, 141);
    let xi = linspace(-4.0, 4.0, 81);
    let mut t = Table::new(
        "fig2_density",
        "1D joint density |Psi(x_e, x_i)|^2, m_e/m_i = 0.2, eta = 0.5, gamma t = 4",
        &[
            ("x_e", "dr_rel"),
            ("x_i", "dr_rel"),
            ("density", "1/dr_rel^2"),
        ],
    );
    for &a in &xe {
        for &b in &xi {
            t.push(vec![a.into(), b.into(), g.density_at(a, b).into()]);
        }
    }
    Ok(t)
}

fn fig3() -> Result<Table> {
    let (m1, m2) = (FIG34_MASS_RATIO, 1.0);
    let mut t = Table::new(
        "fig3_widths",
        "single-particle and coincidence widths, m_e/m_i = 0.1",
        &[
            ("eta", "1"),
            ("s_e", "dr_rel"),
            ("c_e", "dr_rel"),
            ("s_i", "dr_rel"),
            ("c_i", "dr_rel"),
        ],
    );
    for eta in log_grid(1e-3, 1e3, 241)? {
        let r = entanglement::report(eta, m1, m2)?;
        t.push(vec![eta.into(), r.s_e.into(), r.c_e.into(), r.s_i.into(), r.c_i.into()]);
    }
    Ok(t)
}

/// Log grid with `extra` merged in at its sorted position.
fn log_grid_with(lo: f64, hi: f64, n: usize, extra: f64) -> Result<Vec<f64>> {
    let mut g = log_grid(lo, hi, n)?;
    if !g.contains(&extra) {
        g.push(extra);
        g.sort_by(f64::total_cmp);
    }
    Ok(g)
}

fn report_table(name: &str, description: &str, m1: f64, m2: f64, grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(
        name,
        description,
        &[
            ("eta", "1"),
            ("ln_eta", "1"),
            ("r", "1"),
            ("r_e", "1"),
            ("r_i", "1"),
            ("regime", ""),
        ],
    );
    for &eta in grid {
        let rep = entanglement::report(eta, m1, m2)?;
        let r = entanglement::entanglement_r(eta, m1, m2)?;
        t.push(vec![
            eta.into(),
            eta.ln().into(),
            r.into(),
            rep.r_e.into(),
            rep.r_i.into(),
            Cell::Text(rep.regime.to_string()),
        ]);
    }
    Ok(t)
}

fn fig4() -> Result<Table> {
    let (m1, m2) = (FIG34_MASS_RATIO, 1.0);
    let grid = log_grid_with(1e-3, 1e2, 251, eta_star(m1, m2)?)?;
    report_table(
        "fig4_entanglement",
        "entanglement parameter vs eta, m_e/m_i = 0.1; the grid contains eta*",
        m1,
        m2,
        &grid,
    )
}

fn fig8() -> Result<Vec<Table>> {
    let mol = log_grid_with(1e-3, 1e3, 241, 0.5)?;
    let ion_star = eta_star(1.0, 1e4)?;
    let ion = log_grid_with(1e-8, 1e8, 321, ion_star)?;
    Ok(vec![
        report_table(
            "fig8_molecular",
            "entanglement parameter for equal fragment masses",
            1.0,
            1.0,
            &mol,
        )?,
        report_table(
            "fig8_ionization",
            "entanglement parameter for m_i = 1e4 m_e",
            1.0,
            1e4,
            &ion,
        )?,
    ])
}

/// Parameters of the evolution figures: m_e/M = 0.1, E* = 1, gamma = 1e-3,
/// and dr_cm0 set by `eta0`.
pub fn trace_params(eta0: f64) -> Result<SystemParams> {
    let base = SystemParams {
        m1: 1.0,
        m2: 9.0,
        omega: 1.5,
        e0: -0.5,
        gamma: 1e-3,
        dr_cm0: 1.0,
        mode: Mode::Ionization,
    };
    with_eta0(&base, eta0)
}

fn trace_table(name: &str, eta0: f64) -> Result<Table> {
    let p = trace_params(eta0)?;
    let d = p.derive()?;
    let grid = default_time_grid(&d, 301)?;
    let tr = evolve(&p, &grid)?;
    let mut t = Table::new(
        name,
        format!("width evolution with eta0 = {eta0}, m_e/M = 0.1"),
        &[
            ("t", "t_spr_rel"),
            ("dr_cm", "dr_rel0"),
            ("dr_rel", "dr_rel0"),
            ("eta", "1"),
            ("r_e", "1"),
            ("r_i", "1"),
        ],
    );
    for i in 0..tr.len() {
        t.push(vec![
            (tr.times[i] / d.t_spr_rel).into(),
            (tr.dr_cm[i] / d.dr_rel0).into(),
            (tr.dr_rel[i] / d.dr_rel0).into(),
            tr.eta[i].into(),
            tr.r_e[i].into(),
            tr.r_i[i].into(),
        ]);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// detector zones

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overlap {
    Inside,
    Edge,
    Outside,
}

impl fmt::Display for Overlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overlap::Inside => "inside",
            Overlap::Edge => "edge",
            Overlap::Outside => "outside",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dot {
    pub center: [f64; 2],
    pub radius: f64,
    pub overlap: Overlap,
    /// Largest relative density over the dot, in units of the zone maximum.
    pub peak_fraction: f64,
}

/// Level set of the relative density in the plane containing the
/// polarization axis (vertical, second coordinate), ion at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneMap {
    pub t: f64,
    pub params: SystemParams,
    pub level: f64,
    /// Maximum of the density, reached on the polarization axis near r = v t.
    pub max: f64,
    /// Radius of the masked core around the ion; see [`newmoon_zones`].
    pub r_core: f64,
    /// Radius v t of the sharp-edge circle.
    pub edge_radius: f64,
    /// Contour as line segments, in atomic units.
    pub segments: Vec<[[f64; 2]; 2]>,
    pub dots: Vec<Dot>,
    pub resolution: usize,
    pub half_width: f64,
}

impl ZoneMap {
    /// All contour points (segment endpoints, duplicates kept).
    pub fn contour(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.segments.iter().flat_map(|s| s.iter().copied())
    }

    /// The mapped density cos^2(theta) S / r^2 at a point of the plane, in
    /// the units of `max`.
    pub fn density(&self, p: [f64; 2]) -> Result<f64> {
        let d = self.params.derive()?;
        let dens = PlaneDensity {
            d,
            t: self.t,
            zeta: d.profile_zeta(self.t),
            r_core: self.r_core,
        };
        Ok(dens.at(p[0], p[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneOptions {
    pub resolution: usize,
}

impl Default for ZoneOptions {
    fn default() -> Self {
        ZoneOptions { resolution: 512 }
    }
}

struct PlaneDensity {
    d: DerivedParams,
    t: f64,
    zeta: f64,
    r_core: f64,
}

impl PlaneDensity {
    fn radial(&self, r: f64) -> f64 {
        let rho = (r - self.d.v * self.t) / self.d.dr_rel0;
        // rho and zeta are finite here, so only a kernel failure could error
        rel_shape(rho, self.zeta).unwrap_or(f64::NAN) / (r * r)
    }

    /// Unnormalized cos^2(theta) S / r^2, zero inside the core mask.
    fn at(&self, x: f64, z: f64) -> f64 {
        let r = x.hypot(z);
        if r < self.r_core {
            return 0.0;
        }
        let c2 = z * z / (r * r);
        c2 * self.radial(r)
    }
}

/// Minimizes `f` over [lo, hi] by a scan of `n` points followed by
/// golden-section refinement around the best sample.
fn scan_min(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = lo;
    let mut best_v = f64::INFINITY;
    for i in 0..n {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best = x;
        }
    }
    golden_section_min(f, (best - h).max(lo), (best + h).min(hi), 1e-12)
}

/// Builds the zone map at time `t` and classifies cm-packet dots centered at
/// `dot_centers` (electron positions, atomic units).
///
/// The relative density is evaluated in the spreading form. Its 1/r^2
/// factor diverges at the ion, far from the physical zones; the disc inside
/// the minimum of S/r^2 along the axis is masked to zero. Dot radius is the
/// cm-packet width dr_cm(t).
pub fn newmoon_zones(
    t: f64,
    params: &SystemParams,
    level: f64,
    dot_centers: &[[f64; 2]],
    opts: ZoneOptions,
) -> Result<ZoneMap> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid("level", format!("must lie in (0, 1), got {level}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    if opts.resolution < 8 {
        return Err(Error::GridTooCoarse {
            points: opts.resolution,
            minimum: 8,
        });
    }
    let d = params.derive()?;
    let edge = d.v * t;
    let scale = rel_width(t, &d);
    let mut dens = PlaneDensity {
        d,
        t,
        zeta: d.profile_zeta(t),
        r_core: 0.0,
    };

    // local maximum next to the edge; S/r^2 also grows toward the ion
    let neg = |r: f64| -dens.radial(r);
    let r_peak = scan_min(&neg, (edge - 4.0 * scale).max(0.25 * edge), edge + 4.0 * scale, 4001);
    let max = dens.radial(r_peak);
    dens.r_core = scan_min(&|r: f64| dens.radial(r), 1e-3 * r_peak, r_peak, 4001);
    let r_core = dens.r_core;
    if !(max.is_finite() && max > 0.0) {
        return Err(Error::OutOfRange {
            what: "zones",
            detail: "density maximum is not finite".into(),
        });
    }

    let n = opts.resolution;
    let half = edge + 5.0 * scale;
    let coord = |j: usize| half * (2.0 * j as f64 - (n - 1) as f64) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(coord).collect();
    let target = level * max;
    let field: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|iz| {
            let z = xs[iz];
            let xs = &xs;
            let dens = &dens;
            xs.iter().map(move |&x| dens.at(x, z) - target)
        })
        .collect();

    let segments = marching_squares(&xs, &field, n)
        .into_iter()
        .map(|seg| seg.map(|p| refine(&dens, target, max, p, &xs, n)))
        .collect();

    let cm = CmPacket::from_derived(&d);
    let radius = cm_width(t, &cm);
    let dots = dot_centers
        .iter()
        .map(|&c| classify_dot(&dens, c, radius, target, max))
        .collect();

    Ok(ZoneMap {
        t,
        params: *params,
        level,
        max,
        r_core,
        edge_radius: edge,
        segments,
        dots,
        resolution: n,
        half_width: half,
    })
}

/// Segments of the zero level of `field` (row-major, `field[iz * n + ix]`).
fn marching_squares(xs: &[f64], field: &[f64], n: usize) -> Vec<[[f64; 2]; 2]> {
    let mut out = Vec::new();
    let f = |ix: usize, iz: usize| field[iz * n + ix];
    let lerp = |a: [f64; 2], b: [f64; 2], fa: f64, fb: f64| {
        let s = fa / (fa - fb);
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    };
    for iz in 0..n - 1 {
        for ix in 0..n - 1 {
            let p = [
                [xs[ix], xs[iz]],
                [xs[ix + 1], xs[iz]],
                [xs[ix + 1], xs[iz + 1]],
                [xs[ix], xs[iz + 1]],
            ];
            let v = [f(ix, iz), f(ix + 1, iz), f(ix + 1, iz + 1), f(ix, iz + 1)];
            let mut crossings = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (v[a] >= 0.0) != (v[b] >= 0.0) {
                    crossings.push(lerp(p[a], p[b], v[a], v[b]));
                }
            }
            match crossings.len() {
                2 => out.push([crossings[0], crossings[1]]),
                4 => {
                    // saddle: pair by the sign of the cell-center average
                    let center = v.iter().sum::<f64>() / 4.0;
                    if (center >= 0.0) == (v[0] >= 0.0) {
                        out.push([crossings[0], crossings[3]]);
                        out.push([crossings[1], crossings[2]]);
                    } else {
                        out.push([crossings[0], crossings[1]]);
                        out.push([crossings[2], crossings[3]]);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// Moves an interpolated crossing onto the level set by bisection along the
/// grid line it lies on, until |density - target| <= 1e-3 max.
fn refine(dens: &PlaneDensity, target: f64, max: f64, p: [f64; 2], xs: &[f64], n: usize) -> [f64; 2] {
    let h = xs[1] - xs[0];
    let cell = |v: f64| (((v - xs[0]) / h).floor() as isize).clamp(0, n as isize - 2) as usize;
    let on_line = |v: f64| {
        let k = ((v - xs[0]) / h).round() as isize;
        let k = k.clamp(0, n as isize - 1) as usize;
        ((v - xs[k]).abs() <= 1e-9 * h).then_some(k)
    };
    // the crossing lies on a horizontal (fixed z) or vertical (fixed x) grid line
    let (lo, hi, horizontal) = if on_line(p[1]).is_some() {
        let j = cell(p[0]);
        (xs[j], xs[j + 1], true)
    } else {
        let j = cell(p[1]);
        (xs[j], xs[j + 1], false)
    };
    let g = |s: f64| {
        if horizontal {
            dens.at(s, p[1]) - target
        } else {
            dens.at(p[0], s) - target
        }
    };
    let (mut a, mut b) = (lo, hi);
    let (mut ga, gb) = (g(a), g(b));
    let mut s = if horizontal { p[0] } else { p[1] };
    if (ga >= 0.0) != (gb >= 0.0) {
        for _ in 0..200 {
            let gs = g(s);
            if gs.abs() <= 1e-6 * max || b - a <= 1e-12 * h {
                break;
            }
            if (gs >= 0.0) == (ga >= 0.0) {
                a = s;
                ga = gs;
            } else {
                b = s;
            }
            s = 0.5 * (a + b);
        }
    }
    if horizontal {
        [s, p[1]]
    } else {
        [p[0], s]
    }
}

fn classify_dot(dens: &PlaneDensity, center: [f64; 2], radius: f64, target: f64, max: f64) -> Dot {
    let mut lowest = f64::INFINITY;
    let mut highest: f64 = 0.0;
    let mut sample = |x: f64, z: f64| {
        let v = dens.at(x, z);
        lowest = lowest.min(v);
        highest = highest.max(v);
    };
    sample(center[0], center[1]);
    for ir in 1..=16 {
        let r = radius * ir as f64 / 16.0;
        for ia in 0..64 {
            let a = 2.0 * PI * ia as f64 / 64.0;
            sample(center[0] + r * a.cos(), center[1] + r * a.sin());
        }
    }
    let overlap = if lowest >= target {
        Overlap::Inside
    } else if highest < 1e-3 * target {
        Overlap::Outside
    } else {
        Overlap::Edge
    };
    Dot {
        center,
        radius,
        overlap,
        peak_fraction: highest / max,
    }
}

/// Parameters of the zone figure: m_e/m_i = 1/1836.15, E* = 1, gamma = 1e-3
/// and a cm packet of 0.05 bohr.
pub fn zone_params() -> SystemParams {
    SystemParams {
        m1: 1.0,
        m2: 1_836.152_673_43,
        omega: 1.5,
        e0: -0.5,
        gamma: 1e-3,
        dr_cm0: 0.05,
        mode: Mode::Ionization,
    }
}

fn fig7() -> Result<Vec<Table>> {
    let p = zone_params();
    let d = p.derive()?;
    let t = 4.0 / p.gamma;
    let edge = d.v * t;
    let level = 1.0 / 3.0;
    let bare = newmoon_zones(t, &p, level, &[], ZoneOptions::default())?;
    // outermost contour crossing of the upper axis
    let z_rim = bare
        .contour()
        .filter(|q| q[0].abs() <= 1.0001 * bare.half_width / (bare.resolution - 1) as f64)
        .map(|q| q[1])
        .fold(0.0, f64::max);
    let centers = [[0.0, edge - 0.7 * d.dr_rel0], [0.0, z_rim], [1.3 * edge, 0.0]];
    let zm = newmoon_zones(t, &p, level, &centers, ZoneOptions::default())?;
    let mut contour = Table::new(
        "fig7_contour",
        "one-third level set of the relative density, polarization axis vertical, ion at origin",
        &[("x1", "bohr"), ("z1", "bohr"), ("x2", "bohr"), ("z2", "bohr")],
    );
    for s in &zm.segments {
        contour.push(vec![s[0][0].into(), s[0][1].into(), s[1][0].into(), s[1][1].into()]);
    }
    let mut dots = Table::new(
        "fig7_dots",
        "cm-packet dots at three electron-detector placements",
        &[
            ("x", "bohr"),
            ("z", "bohr"),
            ("radius", "bohr"),
            ("overlap", ""),
            ("peak_fraction", "1"),
        ],
    );
    for dot in &zm.dots {
        dots.push(vec![
            dot.center[0].into(),
            dot.center[1].into(),
            dot.radius.into(),
            Cell::Text(dot.overlap.to_string()),
            dot.peak_fraction.into(),
        ]);
    }
    Ok(vec![contour, dots])
}

/// Manifest entry for every table: file, description, columns with units.
pub fn manifest(tables: &[(String, &Table)]) -> serde_json::Value {
    serde_json::Value::Array(
        tables
            .iter()
            .map(|(file, t)| {
                serde_json::json!({
                    "file": file,
                    "description": t.description,
                    "columns": t.columns,
                    "rows": t.rows.len(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.to_string().parse::<FigureId>().unwrap(), id);
        }
        assert!(matches!("fig9".parse::<FigureId>(), Err(Error::UnknownFigure(_))));
    }

    #[test]
    fn fig1a_shape() {
        let t = &fig_profiles(FigureId::Fig1a).unwrap()[0];
        let rho = t.column("rho").unwrap();
        let d = t.column("density").unwrap();
        assert!(d.iter().all(|&v| v >= 0.0));
        let imax = d.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert!(rho[imax] < 0.0 && rho[imax] > -0.5);
    }

    #[test]
    fn fig4_minimum_at_eta_star() {
        let t = &fig_profiles(FigureId::Fig4).unwrap()[0];
        let eta = t.column("eta").unwrap();
        let r = t.column("r").unwrap();
        let imin = r.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let es = eta_star(FIG34_MASS_RATIO, 1.0).unwrap();
        assert_eq!(eta[imin], es);
        assert!((r[imin] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fig8_molecular() {
        let tabs = fig_profiles(FigureId::Fig8).unwrap();
        let mol = &tabs[0];
        let eta = mol.column("eta").unwrap();
        let r = mol.column("r").unwrap();
        for (e, r) in eta.iter().zip(&r) {
            if *e == 0.5 {
                assert!((r - 1.0).abs() < 1e-15);
            } else {
                assert!(*r > 1.0);
            }
        }
    }

    #[test]
    fn zones_basic() {
        let p = zone_params();
        let d = p.derive().unwrap();
        let t = 4.0 / p.gamma;
        let edge = d.v * t;
        let centers = [[0.0, edge - 0.7 * d.dr_rel0], [1.3 * edge, 0.0]];
        let zm = newmoon_zones(t, &p, 1.0 / 3.0, &centers, ZoneOptions { resolution: 256 }).unwrap();
        assert!(!zm.segments.is_empty());
        assert_eq!(zm.dots[0].overlap, Overlap::Inside);
        assert_eq!(zm.dots[1].overlap, Overlap::Outside);
        assert!(newmoon_zones(t, &p, 1.0, &[], ZoneOptions::default()).is_err());
        assert!(newmoon_zones(t, &p, 0.0, &[], ZoneOptions::default()).is_err());
    }
}
