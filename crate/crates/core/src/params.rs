//! Physical parameters and the quantities derived from them.
//!
//! Everything is in Hartree atomic units (hbar = m_e = e = 1). Particle 1 is
//! the light fragment (the electron in photoionization), particle 2 the heavy
//! one (the ion).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio hbar*gamma / E* above which the pole approximation is considered broken.
pub const POLE_APPROXIMATION_LIMIT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Mode {
    #[default]
    Ionization,
    Dissociation,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Ionization => f.write_str("ionization"),
            Mode::Dissociation => f.write_str("dissociation"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ionization" => Ok(Mode::Ionization),
            "dissociation" => Ok(Mode::Dissociation),
            other => Err(Error::invalid("mode", format!("unknown mode `{other}`"))),
        }
    }
}

/// Which matrix element the caller hands to [`golden_rule_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CouplingConvention {
    /// |<E| d.F0/2 |0>|, the rotating-wave coupling that appears in the
    /// amplitude equations.
    #[default]
    HalfField,
    /// |<E| d.F0 |0>|, the full field amplitude; halved internally.
    FullField,
}

/// Amplitude decay rate of the bound state from the bound-free coupling,
/// for energy-normalized continuum states. Twice the result is the
/// golden-rule probability rate.
pub fn golden_rule_rate(dipole_coupling: f64, convention: CouplingConvention) -> Result<f64> {
    if !(dipole_coupling >= 0.0) || !dipole_coupling.is_finite() {
        return Err(Error::invalid(
            "dipole_coupling",
            format!("must be finite and non-negative, got {dipole_coupling}"),
        ));
    }
    let c = match convention {
        CouplingConvention::HalfField => dipole_coupling,
        CouplingConvention::FullField => 0.5 * dipole_coupling,
    };
    Ok(PI * c * c)
}

/// Inverse of [`golden_rule_rate`] in the half-field convention: the coupling
/// that produces decay rate `gamma`.
pub fn coupling_for_rate(gamma: f64) -> f64 {
    (gamma / PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub m1: f64,
    pub m2: f64,
    pub omega: f64,
    pub e0: f64,
    pub gamma: f64,
    pub dr_cm0: f64,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub total_mass: f64,
    pub reduced_mass: f64,
    /// Energy of the relative motion at the line center, E* = E0 + omega.
    pub e_star: f64,
    pub v: f64,
    pub k_star: f64,
    /// Decay length of the freshly formed relative packet, v / 2 gamma.
    pub dr_rel0: f64,
    pub dr_cm0: f64,
    pub gamma: f64,
    /// m1 / M (m_e / M for ionization).
    pub light_fraction: f64,
    /// m2 / M (m_i / M for ionization).
    pub heavy_fraction: f64,
    pub t_spr_cm: f64,
    pub t_spr_rel: f64,
    pub eta0: f64,
    pub eta_star: f64,
    pub eta_inf: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        positive("m1", self.m1)?;
        positive("m2", self.m2)?;
        positive("gamma", self.gamma)?;
        positive("dr_cm0", self.dr_cm0)?;
        finite("omega", self.omega)?;
        finite("e0", self.e0)?;
        let excess = self.omega + self.e0;
        if !(excess > 0.0) {
            return Err(Error::BelowThreshold { excess });
        }
        Ok(())
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        self.validate()?;
        let total_mass = self.m1 + self.m2;
        let reduced_mass = self.m1 * self.m2 / total_mass;
        let e_star = self.e0 + self.omega;
        let v = (2.0 * e_star / reduced_mass).sqrt();
        let k_star = (2.0 * reduced_mass * e_star).sqrt();
        let dr_rel0 = v / (2.0 * self.gamma);
        let mass_fraction = reduced_mass / total_mass;
        let eta0 = self.dr_cm0 / dr_rel0;
        Ok(DerivedParams {
            total_mass,
            reduced_mass,
            e_star,
            v,
            k_star,
            dr_rel0,
            dr_cm0: self.dr_cm0,
            gamma: self.gamma,
            light_fraction: self.m1 / total_mass,
            heavy_fraction: self.m2 / total_mass,
            t_spr_cm: 2.0 * total_mass * self.dr_cm0 * self.dr_cm0,
            // Same prefactor as the cm law; see `wavepackets::rel_width`.
            t_spr_rel: 2.0 * reduced_mass * dr_rel0 * dr_rel0,
            eta0,
            eta_star: mass_fraction.sqrt(),
            eta_inf: mass_fraction / eta0,
        })
    }

    /// hbar*gamma / E*, the small parameter of the pole approximation.
    pub fn pole_ratio(&self) -> f64 {
        self.gamma / (self.omega + self.e0)
    }

    pub fn pole_approximation_ok(&self) -> bool {
        self.pole_ratio() <= POLE_APPROXIMATION_LIMIT
    }

    /// Parses the flat `key = value` config format.
    ///
    /// Keys: `m1 m2 omega e0 gamma dr_cm0 mode`. Instead of `gamma` one may
    /// give `coupling` (and optionally `coupling_convention = half|full`), in
    /// which case the rate comes from [`golden_rule_rate`]. `#` starts a
    /// comment.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut m1 = None;
        let mut m2 = None;
        let mut omega = None;
        let mut e0 = None;
        let mut gamma = None;
        let mut dr_cm0 = None;
        let mut coupling = None;
        let mut convention = CouplingConvention::HalfField;
        let mut mode = Mode::Ionization;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Config {
                    line: line_no,
                    message: format!("expected `key = value`, got `{line}`"),
                })?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let num = || -> Result<f64> {
                value.parse::<f64>().map_err(|_| Error::Config {
                    line: line_no,
                    message: format!("`{key}` expects a number, got `{value}`"),
                })
            };
            let slot = match key {
                "m1" => &mut m1,
                "m2" => &mut m2,
                "omega" => &mut omega,
                "e0" => &mut e0,
                "gamma" => &mut gamma,
                "dr_cm0" => &mut dr_cm0,
                "coupling" => &mut coupling,
                "mode" => {
                    mode = value.parse().map_err(|e: Error| Error::Config {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                    continue;
                }
                "coupling_convention" => {
                    convention = match value.to_ascii_lowercase().as_str() {
                        "half" | "half_field" => CouplingConvention::HalfField,
                        "full" | "full_field" => CouplingConvention::FullField,
                        other => {
                            return Err(Error::Config {
                                line: line_no,
                                message: format!("unknown coupling convention `{other}`"),
                            })
                        }
                    };
                    continue;
                }
                other => {
                    return Err(Error::Config {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    })
                }
            };
            if slot.is_some() {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            *slot = Some(num()?);
        }

        let missing = |name: &str| Error::Config {
            line: 0,
            message: format!("missing key `{name}`"),
        };
        let gamma = match (gamma, coupling) {
            (Some(_), Some(_)) => {
                return Err(Error::Config {
                    line: 0,
                    message: "give either `gamma` or `coupling`, not both".into(),
                })
            }
            (Some(g), None) => g,
            (None, Some(c)) => golden_rule_rate(c, convention)?,
            (None, None) => return Err(missing("gamma")),
        };
        let params = SystemParams {
            m1: m1.ok_or_else(|| missing("m1"))?,
            m2: m2.ok_or_else(|| missing("m2"))?,
            omega: omega.ok_or_else(|| missing("omega"))?,
            e0: e0.ok_or_else(|| missing("e0"))?,
            gamma,
            dr_cm0: dr_cm0.ok_or_else(|| missing("dr_cm0"))?,
            mode,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn to_config_string(&self) -> String {
        format!(
            "m1 = {:.16e}\nm2 = {:.16e}\nomega = {:.16e}\ne0 = {:.16e}\ngamma = {:.16e}\ndr_cm0 = {:.16e}\nmode = {}\n",
            self.m1, self.m2, self.omega, self.e0, self.gamma, self.dr_cm0, self.mode
        )
    }
}

impl DerivedParams {
    /// Dimensionless time t / (mu * dr_rel0^2) that parametrizes the
    /// error-function profile of the relative packet.
    pub fn profile_zeta(&self, t: f64) -> f64 {
        t / (self.reduced_mass * self.dr_rel0 * self.dr_rel0)
    }

    /// Inverse of [`DerivedParams::profile_zeta`].
    pub fn time_for_zeta(&self, zeta: f64) -> f64 {
        zeta * self.reduced_mass * self.dr_rel0 * self.dr_rel0
    }

    pub fn max_spreading_time(&self) -> f64 {
        self.t_spr_cm.max(self.t_spr_rel)
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

fn finite(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite, got {x}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base() -> SystemParams {
        SystemParams {
            m1: 1.0,
            m2: 10.0,
            omega: 1.5,
            e0: -0.5,
            gamma: 1e-3,
            dr_cm0: 20.0,
            mode: Mode::Ionization,
        }
    }

    #[test]
    fn equal_masses() {
        let p = SystemParams {
            m1: 3.0,
            m2: 3.0,
            ..base()
        };
        let d = p.derive().unwrap();
        assert_eq!(d.eta_star, 0.5);
        assert_eq!(d.reduced_mass, 1.5);
        assert_eq!(d.total_mass, 6.0);
    }

    #[test]
    fn mass_ratio_one_tenth() {
        let d = base().derive().unwrap();
        // sqrt(10)/11
        assert_relative_eq!(d.eta_star, 0.287_479_787_288_034_48, max_relative = 1e-15);
        assert_relative_eq!(d.light_fraction, 1.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(d.heavy_fraction, 10.0 / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn derived_identities() {
        let d = base().derive().unwrap();
        let frac = d.reduced_mass / d.total_mass;
        assert_relative_eq!(d.eta_star * d.eta_star, frac, max_relative = 4.0 * f64::EPSILON);
        assert_relative_eq!(d.eta_inf * d.eta0, frac, max_relative = 4.0 * f64::EPSILON);
        assert_relative_eq!(d.v, d.k_star / d.reduced_mass, max_relative = 1e-15);
        assert_relative_eq!(d.dr_rel0, d.v / 2e-3, max_relative = 1e-15);
        assert!(d.reduced_mass < 1.0 && d.reduced_mass <= d.total_mass / 4.0);
    }

    #[test]
    fn rejects_below_threshold() {
        let p = SystemParams {
            omega: 0.4,
            ..base()
        };
        assert!(matches!(p.derive(), Err(Error::BelowThreshold { .. })));
        let p = SystemParams {
            omega: 0.5,
            ..base()
        };
        assert!(matches!(p.derive(), Err(Error::BelowThreshold { .. })));
    }

    #[test]
    fn rejects_nonpositive() {
        for bad in [
            SystemParams { m1: 0.0, ..base() },
            SystemParams { m2: -1.0, ..base() },
            SystemParams { dr_cm0: 0.0, ..base() },
            SystemParams { gamma: 0.0, ..base() },
            SystemParams { m1: f64::NAN, ..base() },
        ] {
            assert!(matches!(bad.derive(), Err(Error::InvalidParameter { .. })));
        }
    }

    #[test]
    fn golden_rule() {
        assert_eq!(golden_rule_rate(0.0, CouplingConvention::HalfField).unwrap(), 0.0);
        assert_relative_eq!(
            golden_rule_rate(0.01, CouplingConvention::HalfField).unwrap(),
            3.141_592_653_589_793e-4,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            golden_rule_rate(0.02, CouplingConvention::FullField).unwrap(),
            3.141_592_653_589_793e-4,
            max_relative = 1e-15
        );
        for g in [1e-6, 3.3e-3, 0.25] {
            let c = coupling_for_rate(g);
            assert_relative_eq!(
                golden_rule_rate(c, CouplingConvention::HalfField).unwrap(),
                g,
                max_relative = 1e-15
            );
        }
        assert!(golden_rule_rate(-1e-3, CouplingConvention::HalfField).is_err());
    }

    #[test]
    fn config_round_trip() {
        let p = base();
        let q = SystemParams::from_config_str(&p.to_config_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn config_with_coupling() {
        let text = "# hydrogen-like\nm1 = 1\nm2 = 1836.15\nomega = 1.0\ne0 = -0.5\ncoupling = 0.01\ndr_cm0 = 50\nmode = ionization\n";
        let p = SystemParams::from_config_str(text).unwrap();
        assert_relative_eq!(p.gamma, std::f64::consts::PI * 1e-4, max_relative = 1e-15);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            SystemParams::from_config_str("m1 = 1\nbogus = 2\n"),
            Err(Error::Config { line: 2, .. })
        ));
        assert!(matches!(
            SystemParams::from_config_str("m1 = one\n"),
            Err(Error::Config { line: 1, .. })
        ));
        assert!(matches!(
            SystemParams::from_config_str("m1 = 1\nm2 = 2\n"),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn derive_is_deterministic() {
        let a = base().derive().unwrap();
        let b = base().derive().unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
