//! Time evolution of the two packet widths, eta and R.

use serde::{Deserialize, Serialize};

use crate::entanglement::{self, log_grid};
use crate::error::{Error, Result};
use crate::params::{DerivedParams, Mode, SystemParams};
use crate::wavepackets::{cm_width, rel_width, CmPacket};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub dr_cm: Vec<f64>,
    pub dr_rel: Vec<f64>,
    pub eta: Vec<f64>,
    pub r_e: Vec<f64>,
    pub r_i: Vec<f64>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Rising,
    Falling,
    Constant,
}

/// Direction in which eta moves: it rises from eta0 < eta* toward
/// eta_inf > eta*, and vice versa.
pub fn trend(d: &DerivedParams) -> Trend {
    if d.eta0 < d.eta_star {
        Trend::Rising
    } else if d.eta0 > d.eta_star {
        Trend::Falling
    } else {
        Trend::Constant
    }
}

pub fn evolve(params: &SystemParams, t_grid: &[f64]) -> Result<EvolutionTrace> {
    if t_grid.is_empty() {
        return Err(Error::Empty("time grid"));
    }
    if t_grid.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
        return Err(Error::invalid("t_grid", "times must be finite and >= 0"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("t_grid", "times must be sorted"));
    }
    let d = params.derive()?;
    let cm = CmPacket::from_derived(&d);
    let n = t_grid.len();
    let mut trace = EvolutionTrace {
        times: t_grid.to_vec(),
        dr_cm: Vec::with_capacity(n),
        dr_rel: Vec::with_capacity(n),
        eta: Vec::with_capacity(n),
        r_e: Vec::with_capacity(n),
        r_i: Vec::with_capacity(n),
    };
    for &t in t_grid {
        let dc = cm_width(t, &cm);
        let dr = rel_width(t, &d);
        let eta = entanglement::eta(dc, dr)?;
        let rep = entanglement::report(eta, params.m1, params.m2)?;
        trace.dr_cm.push(dc);
        trace.dr_rel.push(dr);
        trace.eta.push(eta);
        trace.r_e.push(rep.r_e);
        trace.r_i.push(rep.r_i);
    }
    Ok(trace)
}

/// eta_inf = (mu/M) / eta0.
pub fn eta_asymptote(params: &SystemParams) -> Result<f64> {
    Ok(params.derive()?.eta_inf)
}

/// t = 0 followed by `n` log-spaced times over [1e-2, 1e4] times the larger
/// spreading time.
pub fn default_time_grid(d: &DerivedParams, n: usize) -> Result<Vec<f64>> {
    let t = d.max_spreading_time();
    let mut grid = vec![0.0];
    grid.extend(log_grid(1e-2 * t, 1e4 * t, n)?);
    Ok(grid)
}

/// Copy of `params` with dr_cm0 chosen so that eta(0) = `eta0`.
pub fn with_eta0(params: &SystemParams, eta0: f64) -> Result<SystemParams> {
    if !(eta0 > 0.0 && eta0.is_finite()) {
        return Err(Error::invalid("eta0", format!("must be finite and > 0, got {eta0}")));
    }
    let d = params.derive()?;
    Ok(SystemParams {
        dr_cm0: eta0 * d.dr_rel0,
        ..*params
    })
}

/// Photodissociation into fragments of mass `m1_frag`, `m2_frag`, releasing
/// kinetic energy `omega` (the photon energy above the dissociation limit).
///
/// The energy origin is put at the dissociation limit, so e0 = 0 and the
/// fragments separate with v = sqrt(2 omega / mu).
pub fn dissociation_preset(
    m1_frag: f64,
    m2_frag: f64,
    omega: f64,
    gamma_d: f64,
    dr_cm0: f64,
) -> Result<SystemParams> {
    let (light, heavy) = if m1_frag <= m2_frag {
        (m1_frag, m2_frag)
    } else {
        (m2_frag, m1_frag)
    };
    let p = SystemParams {
        m1: light,
        m2: heavy,
        omega,
        e0: 0.0,
        gamma: gamma_d,
        dr_cm0,
        mode: Mode::Dissociation,
    };
    p.validate()?;
    Ok(p)
}
