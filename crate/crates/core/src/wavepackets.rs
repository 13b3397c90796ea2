//! Center-of-mass and relative-motion packets: densities and widths.
//!
//! The relative packet is described through the scaled coordinate
//! rho = (r - v t) / dr_rel0 and the spreading parameter
//! zeta = t / (mu dr_rel0^2). Its radial shape is
//!
//! ```text
//! S(rho, zeta) = e^rho |1 - Erf[sqrt(i/2) (sqrt(zeta)/2 - i rho / sqrt(zeta))]|^2
//! ```
//!
//! which equals |w(z)|^2 for z = ((b - a) + i (a + b)) / 2 with
//! a = sqrt(zeta)/2, b = rho/sqrt(zeta). Evaluating through w avoids the
//! overflow of e^rho against the underflow of |1 - Erf|^2. S integrates to 4
//! over rho.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faddeeva::faddeeva_wide;
use crate::params::DerivedParams;
use crate::quad::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmPacket {
    pub dr0: f64,
    pub mass: f64,
}

impl CmPacket {
    pub fn from_derived(d: &DerivedParams) -> Self {
        CmPacket {
            dr0: d.dr_cm0,
            mass: d.total_mass,
        }
    }
}

/// rms width per Cartesian axis, sqrt(dr0^2 + (t / (2 M dr0))^2).
pub fn cm_width(t: f64, p: &CmPacket) -> f64 {
    p.dr0.hypot(t / (2.0 * p.mass * p.dr0))
}

/// Isotropic Gaussian density of the cm coordinate.
pub fn cm_density(r_cm: [f64; 3], t: f64, p: &CmPacket) -> f64 {
    let w = cm_width(t, p);
    let r2 = r_cm.iter().map(|x| x * x).sum::<f64>();
    (2.0 * PI).powf(-1.5) / (w * w * w) * (-0.5 * r2 / (w * w)).exp()
}

/// Relative-packet width, sqrt(dr_rel0^2 + (t / (2 mu dr_rel0))^2).
///
/// Early on this is the decay length v / 2 gamma of the exponential packet;
/// late it is the half width at half maximum of the Lorentzian.
pub fn rel_width(t: f64, d: &DerivedParams) -> f64 {
    d.dr_rel0.hypot(t / (2.0 * d.reduced_mass * d.dr_rel0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpDensity {
    pub value: f64,
    /// Set when t < 3/gamma, where the undecayed bound amplitude is not negligible.
    pub early_time: bool,
}

/// Density of the freshly formed packet with its sharp edge at r = v t.
///
/// Integrates to 1 - e^{-2 gamma t} over space.
pub fn rel_density_sharp(r_rel: f64, theta: f64, t: f64, d: &DerivedParams) -> Result<SharpDensity> {
    if !(r_rel > 0.0) {
        return Err(Error::invalid("r_rel", format!("must be > 0, got {r_rel}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    let early_time = t < 3.0 / d.gamma;
    let value = if r_rel > d.v * t {
        0.0
    } else {
        let c = theta.cos();
        3.0 / (4.0 * PI) * (2.0 * d.gamma / d.v) * c * c / (r_rel * r_rel)
            * (-2.0 * d.gamma * (t - r_rel / d.v)).exp()
    };
    Ok(SharpDensity { value, early_time })
}

/// Closed-form space integral of [`rel_density_sharp`].
pub fn sharp_norm(t: f64, d: &DerivedParams) -> f64 {
    -(-2.0 * d.gamma * t).exp_m1()
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("zeta", format!("must be finite and > 0, got {zeta}")))
    }
}

/// Radial shape S(rho, zeta) of the spreading packet.
pub fn rel_shape(rho: f64, zeta: f64) -> Result<f64> {
    check_zeta(zeta)?;
    if !rho.is_finite() {
        return Err(Error::invalid("rho", "must be finite"));
    }
    let sz = zeta.sqrt();
    let a = 0.5 * sz;
    let b = rho / sz;
    let z = Complex64::new(0.5 * (b - a), 0.5 * (a + b));
    Ok(faddeeva_wide(z)?.norm_sqr())
}

/// cos^2(theta) S(rho, zeta). Multiply by 3 / (16 pi r^2 dr_rel0) for the
/// physical density.
pub fn rel_density(rho: f64, zeta: f64, theta: f64) -> Result<f64> {
    let c = theta.cos();
    Ok(c * c * rel_shape(rho, zeta)?)
}

/// S / 4, the radial profile normalized to unit area in rho.
pub fn rel_profile_unit(rho: f64, zeta: f64) -> Result<f64> {
    Ok(0.25 * rel_shape(rho, zeta)?)
}

/// Physical density |Psi_rel(r, theta, t)|^2 of the spreading packet.
pub fn rel_density_physical(r_rel: f64, theta: f64, t: f64, d: &DerivedParams) -> Result<f64> {
    if !(r_rel > 0.0) {
        return Err(Error::invalid("r_rel", format!("must be > 0, got {r_rel}")));
    }
    let rho = (r_rel - d.v * t) / d.dr_rel0;
    let zeta = d.profile_zeta(t);
    let c = theta.cos();
    Ok(3.0 / (16.0 * PI * d.dr_rel0) * c * c / (r_rel * r_rel) * rel_shape(rho, zeta)?)
}

/// Space integral of [`rel_density_physical`] at time `t` by quadrature in r
/// and theta, over the physical half-line r > 0.
///
/// The radial integral runs in phi with rho = s tan(phi), s = max(zeta/2, 1),
/// which maps the algebraic tail onto a finite interval.
pub fn rel_norm(t: f64, d: &DerivedParams) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be finite and > 0, got {t}")));
    }
    let zeta = d.profile_zeta(t);
    let s = (0.5 * zeta).max(1.0);
    let rho_lo = -d.v * t / d.dr_rel0;
    let phi_lo = (rho_lo / s).atan();
    let phi_hi = 0.5 * PI;
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        max_panels: 20_000,
    };
    let mut failed = None;
    let radial = integrate(
        |phi: f64| {
            let tan = phi.tan();
            let sec2 = 1.0 + tan * tan;
            match rel_shape(s * tan, zeta) {
                Ok(v) if sec2.is_finite() => 0.25 * v * s * sec2,
                Ok(_) => 0.0,
                Err(e) => {
                    failed.get_or_insert(e);
                    0.0
                }
            }
        },
        phi_lo,
        phi_hi,
        &[phi_lo.max(-(1.0 / s).atan()), 0.0],
        opts,
    )?;
    if let Some(e) = failed {
        return Err(e);
    }
    let angular = integrate(
        |th: f64| {
            let c = th.cos();
            2.0 * PI * c * c * th.sin()
        },
        0.0,
        PI,
        &[],
        QuadOptions::default(),
    )?;
    // the 3/(4 pi) angular normalization of cos^2
    Ok(radial.value * angular.value * 3.0 / (4.0 * PI))
}

/// Late-time limit of the unit-area profile: a Lorentzian of full width zeta.
pub fn lorentzian_unit(rho: f64, zeta: f64) -> f64 {
    zeta / (2.0 * PI * (rho * rho + 0.25 * zeta * zeta))
}

/// Early-time limit of the unit-area profile, e^rho for rho < 0.
pub fn sharp_unit(rho: f64) -> f64 {
    if rho < 0.0 {
        rho.exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelProfile {
    pub zeta: f64,
    pub rho_grid: Vec<f64>,
    /// Unit-area radial profile S/4 on the polarization axis.
    pub density: Vec<f64>,
}

impl RelProfile {
    pub fn sample(rho_grid: &[f64], zeta: f64) -> Result<Self> {
        check_zeta(zeta)?;
        let density = rho_grid
            .par_iter()
            .map(|&rho| rel_profile_unit(rho, zeta))
            .collect::<Result<Vec<_>>>()?;
        Ok(RelProfile {
            zeta,
            rho_grid: rho_grid.to_vec(),
            density,
        })
    }

    pub fn peak(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }
}

/// `n` evenly spaced points on [lo, hi], endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { hi } else { lo + h * i as f64 }).collect()
        }
    }
}
