//! Joint electron-ion (or fragment-fragment) state after one-photon breakup.
//!
//! The two-body state separates into a Gaussian center-of-mass packet and a
//! relative-motion packet born as a one-sided exponential with a sharp edge
//! that later turns Lorentzian. The ratio of the two widths, eta, fixes the
//! single-particle and coincidence widths and the entanglement parameter R.
//!
//! All quantities are in Hartree atomic units.

// `!(x > 0.0)` rejects NaN along with the range
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod amplitudes;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod faddeeva;
pub mod figures;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod table;
pub mod wavepackets;

pub use error::{Error, Result};
pub use params::{golden_rule_rate, CouplingConvention, DerivedParams, Mode, SystemParams};
