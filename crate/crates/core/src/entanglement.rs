//! Single-particle and coincidence widths and the entanglement parameter.
//!
//! Widths are in units of the relative-packet width. With a = m_i/M and
//! b = m_e/M (a + b = 1):
//!
//! ```text
//! s_e = sqrt(eta^2 + a^2)        c_e = eta / sqrt(eta^2 + b^2)
//! s_i = sqrt(eta^2 + b^2)        c_i = eta / sqrt(eta^2 + a^2)
//! R   = sqrt(eta + a^2/eta) sqrt(eta + b^2/eta)
//! ```
//!
//! `m1` is always the light particle's mass and `m2` the heavy one's, as in
//! [`SystemParams`](crate::params::SystemParams).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// eta far below m_e/M: R ~ (mu/M)/eta.
    Region1,
    /// m_e/M << eta << m_i/M: R ~ 1.
    Region2,
    /// eta far above m_i/M: R ~ eta.
    Region3,
    Crossover,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Region1 => "region1",
            Regime::Region2 => "region2",
            Regime::Region3 => "region3",
            Regime::Crossover => "crossover",
        })
    }
}

/// What "much less than" means for [`classify_regime_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub factor: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { factor: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthReport {
    pub eta: f64,
    pub s_e: f64,
    pub s_i: f64,
    pub c_e: f64,
    pub c_i: f64,
    pub r_e: f64,
    pub r_i: f64,
    pub regime: Regime,
}

/// (m1/M, m2/M) after validating the masses.
pub fn mass_fractions(m1: f64, m2: f64) -> Result<(f64, f64)> {
    if !(m1 > 0.0 && m1.is_finite()) {
        return Err(Error::invalid("m1", format!("must be finite and > 0, got {m1}")));
    }
    if !(m2 > 0.0 && m2.is_finite()) {
        return Err(Error::invalid("m2", format!("must be finite and > 0, got {m2}")));
    }
    let total = m1 + m2;
    Ok((m1 / total, m2 / total))
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("eta", format!("must be finite and > 0, got {eta}")))
    }
}

pub fn eta(dr_cm: f64, dr_rel: f64) -> Result<f64> {
    if !(dr_cm > 0.0) {
        return Err(Error::invalid("dr_cm", format!("must be > 0, got {dr_cm}")));
    }
    if !(dr_rel > 0.0) {
        return Err(Error::invalid("dr_rel", format!("must be > 0, got {dr_rel}")));
    }
    Ok(dr_cm / dr_rel)
}

/// (s_e, s_i), single-particle widths of the light and heavy particle.
pub fn single_widths(eta: f64, m1: f64, m2: f64) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let (b, a) = mass_fractions(m1, m2)?;
    Ok((eta.hypot(a), eta.hypot(b)))
}

/// (c_e, c_i), coincidence widths of the light and heavy particle.
pub fn coincidence_widths(eta: f64, m1: f64, m2: f64) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let (b, a) = mass_fractions(m1, m2)?;
    Ok((eta / eta.hypot(b), eta / eta.hypot(a)))
}

/// R = sqrt(eta + a^2/eta) sqrt(eta + b^2/eta).
pub fn entanglement_r(eta: f64, m1: f64, m2: f64) -> Result<f64> {
    check_eta(eta)?;
    let (b, a) = mass_fractions(m1, m2)?;
    Ok((eta + a * a / eta).sqrt() * (eta + b * b / eta).sqrt())
}

/// R^2 - 1 = (eta - ab/eta)^2, free of cancellation near the minimum.
pub fn r_squared_minus_one(eta: f64, m1: f64, m2: f64) -> Result<f64> {
    check_eta(eta)?;
    let (b, a) = mass_fractions(m1, m2)?;
    let d = eta - a * b / eta;
    Ok(d * d)
}

/// sqrt(mu/M), where R reaches its minimum of 1.
pub fn eta_star(m1: f64, m2: f64) -> Result<f64> {
    let (b, a) = mass_fractions(m1, m2)?;
    Ok((a * b).sqrt())
}

pub fn classify_regime(eta: f64, m1: f64, m2: f64) -> Result<Regime> {
    classify_regime_with(eta, m1, m2, RegimeThresholds::default())
}

pub fn classify_regime_with(eta: f64, m1: f64, m2: f64, th: RegimeThresholds) -> Result<Regime> {
    check_eta(eta)?;
    if !(th.factor > 1.0) {
        return Err(Error::invalid("factor", format!("must be > 1, got {}", th.factor)));
    }
    let (b, a) = mass_fractions(m1, m2)?;
    let k = th.factor;
    Ok(if eta < b / k {
        Regime::Region1
    } else if eta > k * a {
        Regime::Region3
    } else if k * b < eta && eta < a / k {
        Regime::Region2
    } else {
        Regime::Crossover
    })
}

pub fn report(eta: f64, m1: f64, m2: f64) -> Result<WidthReport> {
    report_with(eta, m1, m2, RegimeThresholds::default())
}

pub fn report_with(eta: f64, m1: f64, m2: f64, th: RegimeThresholds) -> Result<WidthReport> {
    let (s_e, s_i) = single_widths(eta, m1, m2)?;
    let (c_e, c_i) = coincidence_widths(eta, m1, m2)?;
    Ok(WidthReport {
        eta,
        s_e,
        s_i,
        c_e,
        c_i,
        r_e: s_e / c_e,
        r_i: s_i / c_i,
        regime: classify_regime_with(eta, m1, m2, th)?,
    })
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::invalid("grid", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(Error::invalid("grid", "need at least 2 points"));
    }
    let (l0, l1) = (lo.log10(), hi.log10());
    let step = (l1 - l0) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => 10f64.powf(l0 + step * i as f64),
        })
        .collect())
}
