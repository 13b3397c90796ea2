//! The Faddeeva function w(z) = exp(-z^2) erfc(-iz).
//!
//! Upper half plane: Weideman's rational expansion in (L + iz)/(L - iz) with
//! N = 40 terms, relative error around 1e-14 everywhere in Im z >= 0.
//! Lower half plane: w(z) = 2 exp(-z^2) - w(-z).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest |Re z| or |Im z| accepted by [`faddeeva`].
pub const DOMAIN_LIMIT: f64 = 1e4;

const N: usize = 40;
// exp(-z^2) overflows past this exponent.
const EXP_LIMIT: f64 = 700.0;

struct Weideman {
    l: f64,
    // coeffs[j] multiplies Z^j
    coeffs: [f64; N],
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m = 2 * N;
        let m2 = 2 * m;
        let l = (N as f64 / 2f64.sqrt()).sqrt();
        let mut f = vec![0.0; m2];
        for (idx, k) in (-(m as i64) + 1..m as i64).enumerate() {
            let theta = k as f64 * PI / m as f64;
            let t = l * (theta / 2.0).tan();
            f[idx + 1] = (-t * t).exp() * (l * l + t * t);
        }
        let shifted: Vec<f64> = (0..m2).map(|i| f[(i + m) % m2]).collect();
        let mut coeffs = [0.0; N];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let freq = j + 1;
            let mut acc = 0.0;
            for (n, &v) in shifted.iter().enumerate() {
                let phase = 2.0 * PI * ((freq * n) % m2) as f64 / m2 as f64;
                acc += v * phase.cos();
            }
            *c = acc / m2 as f64;
        }
        Weideman { l, coeffs }
    })
}

fn upper_half(z: Complex64) -> Complex64 {
    let tab = weideman();
    let iz = Complex64::i() * z;
    let denom = tab.l - iz;
    let big_z = (tab.l + iz) / denom;
    let mut p = Complex64::new(0.0, 0.0);
    for &c in tab.coeffs.iter().rev() {
        p = p * big_z + c;
    }
    2.0 * p / (denom * denom) + 1.0 / (PI.sqrt() * denom)
}

// Asymptotic series i/(sqrt(pi) z) * sum (2n-1)!!/(2z^2)^n, for |z| > DOMAIN_LIMIT
// in the upper half plane. Truncation error below 1e-30 there.
fn upper_half_asymptotic(z: Complex64) -> Complex64 {
    let q = 1.0 / (2.0 * z * z);
    let series = 1.0 + q * (1.0 + q * (3.0 + q * 15.0));
    Complex64::i() / (PI.sqrt() * z) * series
}

fn reflect(z: Complex64, w_minus: Complex64) -> Result<Complex64> {
    let exponent = -(z * z);
    if exponent.re > EXP_LIMIT {
        return Err(Error::OutOfRange {
            what: "faddeeva",
            detail: format!("exp(-z^2) overflows at z = {z}"),
        });
    }
    Ok(2.0 * exponent.exp() - w_minus)
}

/// w(z) for |Re z|, |Im z| <= 1e4.
///
/// ```
/// use breakup_core::faddeeva::faddeeva;
/// use num_complex::Complex64;
/// let w = faddeeva(Complex64::new(0.0, 1.0)).unwrap();
/// assert!((w.re - 0.427_583_576_155_807).abs() < 1e-14);
/// ```
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if !(z.re.abs() <= DOMAIN_LIMIT && z.im.abs() <= DOMAIN_LIMIT) {
        return Err(Error::OutOfRange {
            what: "faddeeva",
            detail: format!("|Re z| and |Im z| must be <= {DOMAIN_LIMIT:e}, got {z}"),
        });
    }
    if z.im >= 0.0 {
        Ok(upper_half(z))
    } else {
        reflect(z, upper_half(-z))
    }
}

/// w(z) for any finite z whose result is representable. Beyond the
/// [`faddeeva`] box the leading terms of the asymptotic series are used.
pub fn faddeeva_wide(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::OutOfRange {
            what: "faddeeva",
            detail: format!("non-finite argument {z}"),
        });
    }
    if z.re.abs() <= DOMAIN_LIMIT && z.im.abs() <= DOMAIN_LIMIT {
        return faddeeva(z);
    }
    if z.im >= 0.0 {
        Ok(upper_half_asymptotic(z))
    } else {
        reflect(z, upper_half_asymptotic(-z))
    }
}

/// Complex error function, Erf(z) = 1 - exp(-z^2) w(iz).
pub fn erf(z: Complex64) -> Result<Complex64> {
    let w = faddeeva(Complex64::i() * z)?;
    let e = (-(z * z)).exp();
    Ok(1.0 - e * w)
}
