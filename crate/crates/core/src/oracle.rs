//! Brute-force references for the closed forms.
//!
//! Two independent routes:
//!
//! * the energy integral behind the relative packet, done by quadrature
//!   instead of residues plus the error function;
//! * explicit 1D joint densities |Psi(x_e, x_i)|^2 whose moments give
//!   single-particle and coincidence widths directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitudes;
use crate::entanglement::{self, mass_fractions};
use crate::error::{Error, Result};
use crate::params::{coupling_for_rate, Mode, SystemParams};
use crate::quad::{integrate, QuadOptions};
use crate::wavepackets::{linspace, rel_profile_unit};

/// Minimum points per dimension accepted by [`build_grid`].
pub const MIN_RESOLUTION: usize = 64;

// Gaussian factors are cut at this many standard deviations.
const GAUSS_EXTENT: f64 = 8.0;
// The exponential factor keeps [edge - EXP_EXTENT, edge]; e^-24 ~ 4e-11.
const EXP_EXTENT: f64 = 24.0;

// ---------------------------------------------------------------------------
// energy-integral oracle

/// Unit-area radial profile from the energy integral with the quadratic
/// k(E) expansion,
///
/// ```text
/// I(rho, zeta) = integral dx exp(i rho x/2 - i zeta x^2/8) / (x + i),   P = |I|^2 / (4 pi^2)
/// ```
///
/// with x = (E - E*)/gamma. The real axis is rotated onto the steepest-descent
/// line through the stationary point, which removes the oscillation; the
/// pole at x = -i contributes a residue when the rotation sweeps over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleProfile {
    pub zeta: f64,
    pub rho_grid: Vec<f64>,
    pub density: Vec<f64>,
    /// Absolute error estimate of each density value.
    pub error: Vec<f64>,
}

pub fn quad_rel_packet(rho_grid: &[f64], zeta: f64, params: &SystemParams) -> Result<Vec<f64>> {
    Ok(quad_rel_packet_detailed(rho_grid, zeta, params)?.density)
}

pub fn quad_rel_packet_detailed(
    rho_grid: &[f64],
    zeta: f64,
    params: &SystemParams,
) -> Result<OracleProfile> {
    params.validate()?;
    if !params.pole_approximation_ok() {
        return Err(Error::invalid(
            "gamma",
            format!("gamma/E* = {:e} is outside the pole approximation", params.pole_ratio()),
        ));
    }
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::invalid("zeta", format!("must be finite and > 0, got {zeta}")));
    }
    if rho_grid.is_empty() {
        return Err(Error::Empty("rho grid"));
    }
    let points = rho_grid
        .par_iter()
        .map(|&rho| energy_integral(rho, zeta))
        .collect::<Result<Vec<_>>>()?;
    let density: Vec<f64> = points.iter().map(|p| p.0).collect();
    let error: Vec<f64> = points.iter().map(|p| p.1).collect();
    let peak = density.iter().copied().fold(0.0, f64::max);
    let worst = error.iter().copied().fold(0.0, f64::max);
    if worst > 1e-8 * peak {
        return Err(Error::NoConvergence {
            estimate: worst,
            tolerance: 1e-8 * peak,
        });
    }
    Ok(OracleProfile {
        zeta,
        rho_grid: rho_grid.to_vec(),
        density,
        error,
    })
}

/// (P, error estimate of P) at one point.
fn energy_integral(rho: f64, zeta: f64) -> Result<(f64, f64)> {
    let dir = Complex64::from_polar(1.0, -PI / 4.0);
    // stationary point of the phase, moved off the pole if needed
    let mut c = 2.0 * rho / zeta;
    if (c + 1.0).abs() / 2f64.sqrt() < 0.5 {
        c = if c >= -1.0 { 0.5 } else { -2.5 };
    }
    // leftover linear rate along the line, zero unless c was moved
    let kappa = (0.5 * rho - 0.25 * zeta * c).abs();
    let q = zeta / 8.0;
    let s_max = (kappa + (kappa * kappa + 4.0 * q * 45.0).sqrt()) / (2.0 * q);
    let s_pole = (1.0 - c) / 2f64.sqrt();

    let f = |s: f64| {
        let x = c + s * dir;
        let phase = Complex64::i() * (0.5 * rho * x - q * x * x);
        phase.exp() / (x + Complex64::i()) * dir
    };
    let opts = QuadOptions {
        abs_tol: 1e-11,
        rel_tol: 1e-13,
        max_panels: 20_000,
    };
    let line = integrate(f, -s_max, s_max, &[0.0, s_pole], opts)?;
    let mut total = line.value;
    if c < -1.0 {
        total -= 2.0 * PI * Complex64::i() * Complex64::new(0.5 * rho, zeta / 8.0).exp();
    }
    let norm = 4.0 * PI * PI;
    let p = total.norm_sqr() / norm;
    let err = (2.0 * total.norm() * line.error + line.error * line.error) / norm;
    Ok((p, err))
}

/// Same integral with k(E) truncated at linear order (zeta = 0), which has
/// the sharp-edge profile e^rho Theta(-rho) as its exact value.
///
/// The real axis is folded onto two rays at 45 degrees into the half plane
/// where e^{i rho x/2} decays; the pole at -i stays outside.
pub fn quad_rel_packet_linear(rho_grid: &[f64]) -> Result<Vec<f64>> {
    rho_grid
        .par_iter()
        .map(|&rho| linear_integral(rho))
        .collect()
}

fn linear_integral(rho: f64) -> Result<f64> {
    if rho == 0.0 || !rho.is_finite() {
        return Err(Error::invalid("rho", "the linear-k integral needs finite rho != 0"));
    }
    let sign = if rho < 0.0 { -1.0 } else { 1.0 };
    let right = Complex64::from_polar(1.0, sign * PI / 4.0);
    let left = Complex64::from_polar(1.0, sign * 3.0 * PI / 4.0);
    let g = |x: Complex64| (Complex64::i() * 0.5 * rho * x).exp() / (x + Complex64::i());
    let f = |s: f64| g(s * right) * right - g(s * left) * left;
    let s_max = 90.0 * 2f64.sqrt() / rho.abs();
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-13,
        max_panels: 20_000,
    };
    let r = integrate(f, 0.0, s_max, &[], opts)?;
    Ok(r.value.norm_sqr() / (4.0 * PI * PI))
}

// ---------------------------------------------------------------------------
// joint-density grids

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityModel {
    /// Gaussian cm (std eta) times Gaussian rel (std 1).
    GaussianGaussian,
    /// Gaussian cm (std eta) times e^{x_rel - edge} for x_rel < edge, edge = 2 gamma t.
    GaussianExponential,
}

/// |Psi(x_e, x_i)|^2 sampled on a lattice in (x_cm, x_rel).
///
/// Lengths are in units of the relative width. Node (j, k) sits at
/// x_cm = cm_grid[j], x_rel = rel_grid[k], i.e. at
/// x_e = x_cm + (m_i/M) x_rel and x_i = x_cm - (m_e/M) x_rel; the map has unit
/// Jacobian, so cell areas are equal in both coordinate pairs. A lattice
/// aligned with the packets resolves the thin diagonal ridge of strongly
/// correlated states with a few hundred points per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDensityGrid {
    pub model: DensityModel,
    pub eta: f64,
    pub gamma_t: f64,
    /// m_e / M
    pub light_fraction: f64,
    /// m_i / M
    pub heavy_fraction: f64,
    pub cm_grid: Vec<f64>,
    pub rel_grid: Vec<f64>,
    pub cell_area: f64,
    /// Row-major over (cm, rel); sum * cell_area = 1.
    pub density: Vec<f64>,
}

impl JointDensityGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.cm_grid.len(), self.rel_grid.len())
    }

    pub fn at(&self, j: usize, k: usize) -> f64 {
        self.density[j * self.rel_grid.len() + k]
    }

    /// (x_e, x_i) of lattice node (j, k).
    pub fn node_position(&self, j: usize, k: usize) -> (f64, f64) {
        let xc = self.cm_grid[j];
        let xr = self.rel_grid[k];
        (
            xc + self.heavy_fraction * xr,
            xc - self.light_fraction * xr,
        )
    }

    fn cm_factor(&self, x_cm: f64) -> f64 {
        let z = x_cm / self.eta;
        (-0.5 * z * z).exp() / (self.eta * (2.0 * PI).sqrt())
    }

    fn rel_factor(&self, x_rel: f64) -> f64 {
        match self.model {
            DensityModel::GaussianGaussian => (-0.5 * x_rel * x_rel).exp() / (2.0 * PI).sqrt(),
            DensityModel::GaussianExponential => {
                if x_rel <= self.gamma_t * 2.0 {
                    (x_rel - 2.0 * self.gamma_t).exp()
                } else {
                    0.0
                }
            }
        }
    }

    fn cm_support(&self) -> (f64, f64) {
        (-GAUSS_EXTENT * self.eta, GAUSS_EXTENT * self.eta)
    }

    fn rel_support(&self) -> (f64, f64) {
        match self.model {
            DensityModel::GaussianGaussian => (-GAUSS_EXTENT, GAUSS_EXTENT),
            DensityModel::GaussianExponential => {
                let edge = 2.0 * self.gamma_t;
                (edge - EXP_EXTENT, edge)
            }
        }
    }

    /// Analytic density at an arbitrary point (x_e, x_i).
    pub fn density_at(&self, x_e: f64, x_i: f64) -> f64 {
        let x_cm = self.light_fraction * x_e + self.heavy_fraction * x_i;
        let x_rel = x_e - x_i;
        self.cm_factor(x_cm) * self.rel_factor(x_rel)
    }

    /// Discrete normalization, sum * cell_area.
    pub fn total(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.cell_area
    }
}

pub fn build_grid(
    model: DensityModel,
    eta: f64,
    m1: f64,
    m2: f64,
    gamma_t: f64,
    resolution: usize,
) -> Result<JointDensityGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::GridTooCoarse {
            points: resolution,
            minimum: MIN_RESOLUTION,
        });
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid("eta", format!("must be finite and > 0, got {eta}")));
    }
    if model == DensityModel::GaussianExponential && !(gamma_t > 0.0 && gamma_t.is_finite()) {
        return Err(Error::invalid("gamma_t", format!("must be finite and > 0, got {gamma_t}")));
    }
    let (b, a) = mass_fractions(m1, m2)?;
    let mut grid = JointDensityGrid {
        model,
        eta,
        gamma_t,
        light_fraction: b,
        heavy_fraction: a,
        cm_grid: Vec::new(),
        rel_grid: Vec::new(),
        cell_area: 0.0,
        density: Vec::new(),
    };
    let (c0, c1) = grid.cm_support();
    let (r0, r1) = grid.rel_support();
    let hc = (c1 - c0) / resolution as f64;
    let hr = (r1 - r0) / resolution as f64;
    // cell midpoints; for the exponential this keeps the edge on a cell boundary
    grid.cm_grid = (0..resolution).map(|j| c0 + hc * (j as f64 + 0.5)).collect();
    grid.rel_grid = (0..resolution).map(|k| r0 + hr * (k as f64 + 0.5)).collect();
    grid.cell_area = hc * hr;
    let cm_vals: Vec<f64> = grid.cm_grid.iter().map(|&x| grid.cm_factor(x)).collect();
    let rel_vals: Vec<f64> = grid.rel_grid.iter().map(|&x| grid.rel_factor(x)).collect();
    let mut density: Vec<f64> = cm_vals
        .par_iter()
        .flat_map_iter(|&c| rel_vals.iter().map(move |&r| c * r))
        .collect();
    let total = density.iter().sum::<f64>() * grid.cell_area;
    for v in &mut density {
        *v /= total;
    }
    grid.density = density;
    Ok(grid)
}

/// Which distribution a width is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Slice {
    /// Single-particle (marginal) widths of both particles.
    Marginal,
    /// Width of x_e with the heavy particle detected at x_i = value.
    FixedIon(f64),
    /// Width of x_i with the light particle detected at x_e = value.
    FixedElectron(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct WidthFragment {
    pub electron: Option<f64>,
    pub ion: Option<f64>,
}

/// Weight (marginal density at the fixed coordinate), mean and rms width of
/// one conditional slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceStats {
    pub weight: f64,
    pub mean: f64,
    pub std: f64,
}

pub fn grid_widths(grid: &JointDensityGrid, slice: Slice) -> Result<WidthFragment> {
    let (nc, nr) = grid.shape();
    if nc < MIN_RESOLUTION || nr < MIN_RESOLUTION {
        return Err(Error::GridTooCoarse {
            points: nc.min(nr),
            minimum: MIN_RESOLUTION,
        });
    }
    match slice {
        Slice::Marginal => {
            let (se, si) = marginal_widths(grid);
            Ok(WidthFragment {
                electron: Some(se),
                ion: Some(si),
            })
        }
        Slice::FixedIon(x) => Ok(WidthFragment {
            electron: Some(slice_stats(grid, slice_fixed(x, true), nr)?.std),
            ion: None,
        }),
        Slice::FixedElectron(x) => Ok(WidthFragment {
            electron: None,
            ion: Some(slice_stats(grid, slice_fixed(x, false), nr)?.std),
        }),
    }
}

fn marginal_widths(grid: &JointDensityGrid) -> (f64, f64) {
    let (nc, nr) = grid.shape();
    // fixed summation order: rows in sequence
    let mut m = [0.0f64; 5]; // E[x_e], E[x_e^2], E[x_i], E[x_i^2], mass
    for j in 0..nc {
        for k in 0..nr {
            let p = grid.density[j * nr + k] * grid.cell_area;
            let (xe, xi) = grid.node_position(j, k);
            m[0] += p * xe;
            m[1] += p * xe * xe;
            m[2] += p * xi;
            m[3] += p * xi * xi;
            m[4] += p;
        }
    }
    let var_e = m[1] / m[4] - (m[0] / m[4]).powi(2);
    let var_i = m[3] / m[4] - (m[2] / m[4]).powi(2);
    (var_e.max(0.0).sqrt(), var_i.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy)]
struct FixedSlice {
    x: f64,
    fixed_ion: bool,
}

fn slice_fixed(x: f64, fixed_ion: bool) -> FixedSlice {
    FixedSlice { x, fixed_ion }
}

/// Statistics of the free coordinate on a slice, sampled straight from the
/// analytic factors at `samples` midpoints in x_rel = u.
///
/// Ion fixed at x*: x_cm = x* + (m_e/M) u, free x_e = x* + u.
/// Electron fixed at x*: x_cm = x* - (m_i/M) u, free x_i = x* - u.
fn slice_stats(grid: &JointDensityGrid, s: FixedSlice, samples: usize) -> Result<SliceStats> {
    let (slope, free_sign) = if s.fixed_ion {
        (grid.light_fraction, 1.0)
    } else {
        (-grid.heavy_fraction, -1.0)
    };
    let (c0, c1) = grid.cm_support();
    let (r0, r1) = grid.rel_support();
    // u-range where x* + slope u lies inside the cm support
    let (ua, ub) = ((c0 - s.x) / slope, (c1 - s.x) / slope);
    let lo = r0.max(ua.min(ub));
    let hi = r1.min(ua.max(ub));
    if !(hi > lo) {
        return Err(Error::OutOfRange {
            what: "slice",
            detail: format!("fixed coordinate {} lies outside the density support", s.x),
        });
    }
    let h = (hi - lo) / samples as f64;
    let mut w = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for n in 0..samples {
        let u = lo + h * (n as f64 + 0.5);
        let p = grid.cm_factor(s.x + slope * u) * grid.rel_factor(u);
        w += p;
        m1 += p * u;
        m2 += p * u * u;
    }
    if !(w > 0.0) {
        return Err(Error::OutOfRange {
            what: "slice",
            detail: format!("density vanishes on the slice at {}", s.x),
        });
    }
    let mean_u = m1 / w;
    let var = (m2 / w - mean_u * mean_u).max(0.0);
    Ok(SliceStats {
        weight: w * h,
        mean: s.x + free_sign * mean_u,
        std: var.sqrt(),
    })
}

/// Slice statistics for the coincidence scheme, exposed for variance checks.
pub fn conditional_stats(grid: &JointDensityGrid, slice: Slice, samples: usize) -> Result<SliceStats> {
    if samples < MIN_RESOLUTION {
        return Err(Error::GridTooCoarse {
            points: samples,
            minimum: MIN_RESOLUTION,
        });
    }
    match slice {
        Slice::Marginal => Err(Error::invalid("slice", "marginal has no conditional statistics")),
        Slice::FixedIon(x) => slice_stats(grid, slice_fixed(x, true), samples),
        Slice::FixedElectron(x) => slice_stats(grid, slice_fixed(x, false), samples),
    }
}

/// Means of x_e and x_i over the grid.
pub fn grid_means(grid: &JointDensityGrid) -> (f64, f64) {
    let (nc, nr) = grid.shape();
    let mut me = 0.0;
    let mut mi = 0.0;
    for j in 0..nc {
        for k in 0..nr {
            let p = grid.density[j * nr + k] * grid.cell_area;
            let (xe, xi) = grid.node_position(j, k);
            me += p * xe;
            mi += p * xi;
        }
    }
    (me, mi)
}

// ---------------------------------------------------------------------------
// suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    All,
    Entanglement,
    Profile,
    Amplitudes,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "entanglement" => Ok(Suite::Entanglement),
            "profile" => Ok(Suite::Profile),
            "amplitudes" => Ok(Suite::Amplitudes),
            other => Err(Error::invalid("suite", format!("unknown suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCase {
    pub id: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleCase {
    fn relative(id: String, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        let deviation = ((closed_form - oracle) / oracle).abs();
        OracleCase {
            id,
            closed_form,
            oracle,
            deviation,
            tolerance,
            pass: deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub cases: Vec<OracleCase>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OracleCase> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

pub const ETA_MATRIX: [f64; 7] = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];
/// m_e / m_i
pub const MASS_RATIOS: [f64; 4] = [1e-4, 0.1, 0.2, 1.0];
pub const PROFILE_ZETAS: [f64; 5] = [0.01, 0.3, 1.0, 5.0, 20.0];

/// Gaussian-grid widths against the closed forms over eta x mass ratio.
pub fn entanglement_cases(resolution: usize) -> Result<Vec<OracleCase>> {
    let combos: Vec<(f64, f64)> = MASS_RATIOS
        .iter()
        .flat_map(|&ratio| ETA_MATRIX.iter().map(move |&eta| (ratio, eta)))
        .collect();
    let per: Vec<Vec<OracleCase>> = combos
        .par_iter()
        .map(|&(ratio, eta)| -> Result<Vec<OracleCase>> {
            let (m1, m2) = (ratio, 1.0);
            let g = build_grid(DensityModel::GaussianGaussian, eta, m1, m2, 0.0, resolution)?;
            let marg = grid_widths(&g, Slice::Marginal)?;
            let (me, mi) = grid_means(&g);
            let ce = grid_widths(&g, Slice::FixedIon(mi))?.electron.unwrap_or(f64::NAN);
            let ci = grid_widths(&g, Slice::FixedElectron(me))?.ion.unwrap_or(f64::NAN);
            let se = marg.electron.unwrap_or(f64::NAN);
            let si = marg.ion.unwrap_or(f64::NAN);
            let rep = entanglement::report(eta, m1, m2)?;
            let tag = format!("ratio={ratio:e},eta={eta:e}");
            let tol = 1e-4;
            Ok(vec![
                OracleCase::relative(format!("s_e[{tag}]"), rep.s_e, se, tol),
                OracleCase::relative(format!("s_i[{tag}]"), rep.s_i, si, tol),
                OracleCase::relative(format!("c_e[{tag}]"), rep.c_e, ce, tol),
                OracleCase::relative(format!("c_i[{tag}]"), rep.c_i, ci, tol),
                OracleCase::relative(format!("r_e[{tag}]"), rep.r_e, se / ce, tol),
                OracleCase::relative(format!("r_i[{tag}]"), rep.r_i, si / ci, tol),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// Parameters with gamma/E* = 1e-4 used by the profile and amplitude suites.
pub fn reference_params() -> SystemParams {
    SystemParams {
        m1: 1.0,
        m2: 1_836.152_673_43,
        omega: 1.0,
        e0: -0.5,
        gamma: 5e-5,
        dr_cm0: 1.0,
        mode: Mode::Ionization,
    }
}

/// Closed-form profile against the energy-integral oracle, deviation taken
/// relative to the profile peak.
pub fn profile_cases(points: usize) -> Result<Vec<OracleCase>> {
    let params = reference_params();
    let grid = linspace(-10.0, 3.0, points);
    let mut cases = Vec::new();
    for &zeta in &PROFILE_ZETAS {
        let oracle = quad_rel_packet(&grid, zeta, &params)?;
        let closed = grid
            .iter()
            .map(|&rho| rel_profile_unit(rho, zeta))
            .collect::<Result<Vec<_>>>()?;
        let peak = oracle.iter().copied().fold(0.0, f64::max);
        let (imax, dev) = closed
            .iter()
            .zip(&oracle)
            .map(|(c, o)| (c - o).abs() / peak)
            .enumerate()
            .fold((0, 0.0), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
        cases.push(OracleCase {
            id: format!("profile[zeta={zeta:e}]"),
            closed_form: closed[imax],
            oracle: oracle[imax],
            deviation: dev,
            tolerance: 1e-5,
            pass: dev <= 1e-5,
        });
    }
    let left = linspace(-8.0, -0.25, 32);
    let right = linspace(0.25, 3.0, 12);
    let lin_left = quad_rel_packet_linear(&left)?;
    let lin_right = quad_rel_packet_linear(&right)?;
    let dev_left = left
        .iter()
        .zip(&lin_left)
        .map(|(r, v)| (v - r.exp()).abs())
        .fold(0.0, f64::max);
    let dev_right = lin_right.iter().copied().fold(0.0, f64::max);
    cases.push(OracleCase {
        id: "linear-k[sharp edge]".into(),
        closed_form: 1.0,
        oracle: 1.0 - dev_left.max(dev_right),
        deviation: dev_left.max(dev_right),
        tolerance: 1e-9,
        pass: dev_left.max(dev_right) <= 1e-9,
    });
    Ok(cases)
}

/// Probability conservation of the amplitudes with coupling^2 = gamma/pi.
pub fn amplitude_cases() -> Result<Vec<OracleCase>> {
    let p = reference_params();
    let c = coupling_for_rate(p.gamma);
    [0.0, 1.0 / p.gamma, 10.0 / p.gamma]
        .iter()
        .map(|&t| {
            let total = amplitudes::total_population(t, c, &p)?;
            let dev = (total - 1.0).abs();
            Ok(OracleCase {
                id: format!("unitarity[gamma*t={}]", t * p.gamma),
                closed_form: 1.0,
                oracle: total,
                deviation: dev,
                tolerance: 1e-3,
                pass: dev <= 1e-3,
            })
        })
        .collect()
}

pub fn run_suite(suite: Suite) -> Result<OracleReport> {
    let mut cases = Vec::new();
    if matches!(suite, Suite::All | Suite::Entanglement) {
        cases.extend(entanglement_cases(256)?);
    }
    if matches!(suite, Suite::All | Suite::Profile) {
        cases.extend(profile_cases(131)?);
    }
    if matches!(suite, Suite::All | Suite::Amplitudes) {
        cases.extend(amplitude_cases()?);
    }
    Ok(OracleReport { cases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn energy_integral_matches_reference() {
        let p = reference_params();
        let rho = [-5.0, -0.5, 0.0, 0.5];
        let got = quad_rel_packet(&rho, 0.01, &p).unwrap();
        let want = [
            0.005_611_443_238_156_410_302_5,
            0.517_175_085_189_194_950_26,
            0.236_287_272_943_466_392_48,
            0.006_307_783_771_054_641_537_2,
        ];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
        let got = quad_rel_packet(&[-10.0, 0.0, 25.0], 20.0, &p).unwrap();
        assert!((got[0] - 0.021_318_484_743_106_663).abs() < 1e-10);
        assert!((got[1] - 0.028_360_730_676_920_678).abs() < 1e-10);
        assert!((got[2] - 0.004_227_071_092_637_474_6).abs() < 1e-10);
    }

    #[test]
    fn energy_integral_near_pole_line() {
        // c = 2 rho / zeta close to -1 triggers the shifted line
        let p = reference_params();
        let got = quad_rel_packet(&[-0.5, -0.45], 1.0, &p).unwrap();
        for (g, rho) in got.iter().zip([-0.5, -0.45]) {
            let want = rel_profile_unit(rho, 1.0).unwrap();
            assert!((g - want).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_integral_rejects() {
        let p = reference_params();
        assert!(quad_rel_packet(&[0.0], 0.0, &p).is_err());
        assert!(quad_rel_packet(&[], 1.0, &p).is_err());
        let broad = SystemParams { gamma: 0.1, ..p };
        assert!(quad_rel_packet(&[0.0], 1.0, &broad).is_err());
    }

    #[test]
    fn linear_k_gives_sharp_edge() {
        let v = quad_rel_packet_linear(&[-3.0, -0.1, 0.1, 2.0]).unwrap();
        assert_relative_eq!(v[0], (-3.0f64).exp(), max_relative = 1e-9);
        assert_relative_eq!(v[1], (-0.1f64).exp(), max_relative = 1e-9);
        assert!(v[2] < 1e-12 && v[3] < 1e-12);
        assert!(quad_rel_packet_linear(&[0.0]).is_err());
    }

    #[test]
    fn grid_rejects_coarse() {
        assert!(matches!(
            build_grid(DensityModel::GaussianGaussian, 1.0, 1.0, 1.0, 0.0, 32),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(build_grid(DensityModel::GaussianExponential, 1.0, 1.0, 1.0, 0.0, 128).is_err());
    }

    #[test]
    fn grid_normalized_and_separable() {
        let g = build_grid(DensityModel::GaussianExponential, 0.5, 1.0, 5.0, 4.0, 128).unwrap();
        assert!((g.total() - 1.0).abs() < 1e-12);
        assert!(g.density.iter().all(|&v| v >= 0.0));
        // ratio of two nodes depends only on the cm and rel factors
        let r1 = g.at(40, 70) / g.at(41, 70);
        let r2 = g.at(40, 90) / g.at(41, 90);
        assert_relative_eq!(r1, r2, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_reference_widths() {
        let g = build_grid(DensityModel::GaussianGaussian, 0.5, 1.0, 1.0, 0.0, 256).unwrap();
        let c = grid_widths(&g, Slice::FixedIon(0.0)).unwrap().electron.unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);
        let g = build_grid(DensityModel::GaussianGaussian, 1.0, 1.0, 10.0, 0.0, 256).unwrap();
        let s = grid_widths(&g, Slice::Marginal).unwrap().electron.unwrap();
        assert!((s - 1.351_460_795_210_773_2).abs() < 1e-4);
    }

    #[test]
    fn exponential_rel_marginal_has_unit_std() {
        let g = build_grid(DensityModel::GaussianExponential, 1e-3, 1.0, 1e4, 4.0, 1024).unwrap();
        let (nc, nr) = g.shape();
        let mut m = [0.0; 3];
        for j in 0..nc {
            for k in 0..nr {
                let p = g.at(j, k) * g.cell_area;
                let x = g.rel_grid[k];
                m[0] += p;
                m[1] += p * x;
                m[2] += p * x * x;
            }
        }
        let std = (m[2] / m[0] - (m[1] / m[0]).powi(2)).sqrt();
        assert!((std - 1.0).abs() < 1e-4, "{std}");
    }

    #[test]
    fn slice_outside_support() {
        let g = build_grid(DensityModel::GaussianGaussian, 0.1, 1.0, 1.0, 0.0, 128).unwrap();
        assert!(grid_widths(&g, Slice::FixedIon(1e3)).is_err());
    }

    #[test]
    fn suites_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn amplitude_suite_passes() {
        let cases = amplitude_cases().unwrap();
        assert_eq!(cases.len(), 3);
        assert!(cases.iter().all(|c| c.pass), "{cases:?}");
    }
}
