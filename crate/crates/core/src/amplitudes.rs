//! Bound-state and continuum amplitudes for a rectangular pulse in the
//! rotating-wave approximation, plus the high-energy Coulomb radial function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::quad::{integrate, QuadOptions};

/// Ground-state amplitude C0(t) = exp(-i e0 t - gamma t).
pub fn c0(t: f64, params: &SystemParams) -> Complex64 {
    Complex64::new(-params.gamma * t, -params.e0 * t).exp()
}

/// Continuum amplitude density C_E(t) for a flat coupling `coupling` = d.F0/2.
pub fn ce(energy: f64, t: f64, coupling: f64, params: &SystemParams) -> Complex64 {
    let detuning = energy - params.e0 - params.omega;
    let bound = Complex64::new(-params.gamma * t, -params.e0 * t).exp();
    let free = Complex64::new(0.0, -(energy - params.omega) * t).exp();
    coupling / Complex64::new(detuning, params.gamma) * (bound - free)
}

/// |C_E(t)|^2 written without the cancellation of the two-exponential form.
pub fn ce_norm_sqr(energy: f64, t: f64, coupling: f64, params: &SystemParams) -> f64 {
    let detuning = energy - params.e0 - params.omega;
    let g = params.gamma;
    let decay = (-g * t).exp();
    // |e^{-gt} e^{-i d t} - 1|^2 with 1 - cos written as 2 sin^2
    let half = (0.5 * detuning * t).sin();
    let num = (1.0 - decay).powi(2) + 4.0 * decay * half * half;
    coupling * coupling * num / (detuning * detuning + g * g)
}

/// Integral of |C_E|^2 over the whole real energy line: pi c^2 / gamma * (1 - e^{-2 gamma t}).
pub fn ce_total_analytic(t: f64, coupling: f64, gamma: f64) -> f64 {
    PI * coupling * coupling / gamma * -(-2.0 * gamma * t).exp_m1()
}

/// A snapshot of the amplitudes at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeState {
    pub t: f64,
    pub c0: Complex64,
    pub coupling: f64,
    params: SystemParams,
}

impl AmplitudeState {
    pub fn new(t: f64, coupling: f64, params: &SystemParams) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
        }
        Ok(AmplitudeState {
            t,
            c0: c0(t, params),
            coupling,
            params: *params,
        })
    }

    pub fn ce(&self, energy: f64) -> Complex64 {
        ce(energy, self.t, self.coupling, &self.params)
    }

    /// Continuum population by adaptive quadrature over E in [0, inf).
    pub fn continuum_population(&self) -> Result<f64> {
        continuum_population(self.t, self.coupling, &self.params)
    }
}

/// Population in the continuum, integral over E >= 0 of |C_E(t)|^2.
///
/// Adaptive quadrature covers [0, E* + W] with W = max(E*, 50 max(gamma, 1/t)).
pub fn continuum_population(t: f64, coupling: f64, params: &SystemParams) -> Result<f64> {
    params.validate()?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let e_star = params.e0 + params.omega;
    let g = params.gamma;
    let w = e_star.max(50.0 * g.max(1.0 / t));
    let f = |e: f64| ce_norm_sqr(e, t, coupling, params);
    let scale = coupling * coupling / g;
    let opts = QuadOptions {
        abs_tol: 1e-11 * scale.max(f64::MIN_POSITIVE),
        rel_tol: 1e-10,
        max_panels: 200_000,
    };
    let mut breaks = vec![e_star];
    for k in 1..=40 {
        let dx = g * (k * k) as f64;
        breaks.push(e_star - dx);
        breaks.push(e_star + dx);
    }
    let core = integrate(f, 0.0, e_star + w, &breaks, opts)?;
    // Above E* + W the smooth Lorentzian part integrates in closed form; the
    // cos(detuning t) part is bounded by 4 c^2 e^{-gt} / (t W^2) and dropped.
    let tail = coupling * coupling * (1.0 + (-2.0 * g * t).exp()) / g * (g / w).atan();
    Ok(core.value + tail)
}

/// |C0|^2 + continuum population.
pub fn total_population(t: f64, coupling: f64, params: &SystemParams) -> Result<f64> {
    Ok(c0(t, params).norm_sqr() + continuum_population(t, coupling, params)?)
}

/// Coulomb phase shift sigma_1 = arg Gamma(2 + i eta_c), eta_c = -mu/k for an
/// attractive unit charge, reduced to (-pi, pi].
pub fn coulomb_phase_l1(k: f64, reduced_mass: f64) -> f64 {
    let z = Complex64::new(2.0, -reduced_mass / k);
    wrap_angle(ln_gamma(z).im)
}

fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x.rem_euclid(two_pi);
    if y > PI {
        y -= two_pi;
    }
    y
}

/// Complex log-gamma for Re z > 0: shift by 10, then Stirling.
fn ln_gamma(z: Complex64) -> Complex64 {
    const SHIFT: usize = 10;
    let mut shift_log = Complex64::new(0.0, 0.0);
    let mut zz = z;
    for _ in 0..SHIFT {
        shift_log += zz.ln();
        zz += 1.0;
    }
    let inv = 1.0 / zz;
    let inv2 = inv * inv;
    // Bernoulli terms B_2n / (2n (2n-1) z^(2n-1))
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    (zz - 0.5) * zz.ln() - zz + 0.5 * (2.0 * PI).ln() + series - shift_log
}

/// High-energy radial function R_E1(r) for l = 1, energy-normalized.
///
/// With `include_coulomb_phase` off, the logarithmic phase and sigma_1 are dropped.
pub fn radial_high_energy(
    r: f64,
    energy: f64,
    params: &SystemParams,
    include_coulomb_phase: bool,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid("r", format!("must be > 0, got {r}")));
    }
    if !(energy > 0.0) {
        return Err(Error::invalid("energy", format!("must be > 0, got {energy}")));
    }
    let mu = params.m1 * params.m2 / (params.m1 + params.m2);
    let k = (2.0 * mu * energy).sqrt();
    let mut phase = k * r;
    if include_coulomb_phase {
        // 1/(k a0) with a0 = 1/mu
        phase += mu / k * (2.0 * k * r).ln() + coulomb_phase_l1(k, mu);
    }
    Ok((2.0 * mu / (PI * k)).sqrt() / r * phase.cos())
}
