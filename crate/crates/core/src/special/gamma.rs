//! Complex log-gamma via Stirling's series with upward recurrence.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{finite, Error, Result};

/// B_{2k} / (2k (2k - 1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Distance from `z` to the nearest integer (measured in the complex plane).
pub(crate) fn integer_distance(z: Complex64) -> f64 {
    Complex64::new(z.re - z.re.round(), z.im).norm()
}

fn stirling(z: Complex64) -> Complex64 {
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = zinv;
    for c in STIRLING {
        series += pow * c;
        pow *= zinv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// ln Γ(z) on the standard branch: analytic in the plane cut along the
/// non-positive real axis and real for real positive `z`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma argument {z} is not finite")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "log_gamma",
            at: z,
        });
    }
    // ln Γ(z) = ln Γ(z + m) - Σ ln(z + j); principal logs keep the branch
    // continuous off the negative real axis.
    // The modulus is accumulated as a product (one rounding in ln) and
    // the arguments as a sum, which fixes the branch.
    let mut shifted = z;
    let mut product = Complex64::new(1.0, 0.0);
    let mut ln_scale = 0.0;
    let mut arg_sum = 0.0;
    while shifted.re < 0.0 || shifted.norm() < 7.0 {
        product *= shifted;
        arg_sum += shifted.arg();
        shifted += 1.0;
        let size = product.norm();
        if size > 1e250 {
            product /= size;
            ln_scale += size.ln();
        }
    }
    let correction = Complex64::new(product.norm().ln() + ln_scale, arg_sum);
    finite("log_gamma", stirling(shifted) - correction)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    let lg = log_gamma(z)?;
    if lg.re > 709.0 {
        return Err(Error::NonFinite("gamma"));
    }
    Ok(lg.exp())
}

/// 1/Γ(z), an entire function: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lg = log_gamma(z)?;
    if -lg.re > 709.0 {
        return Err(Error::NonFinite("rgamma"));
    }
    Ok((-lg).exp())
}

/// Π Γ(num_i) / Π Γ(den_j), formed in log space so that large intermediate
/// factors do not overflow. A pole in the denominator makes the ratio zero.
pub fn gamma_ratio(num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    if den.iter().any(|&d| is_nonpositive_integer(d)) {
        if let Some(&p) = num.iter().find(|&&n| is_nonpositive_integer(n)) {
            return Err(Error::Pole {
                function: "gamma_ratio",
                at: p,
            });
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &n in num {
        acc += log_gamma(n)?;
    }
    for &d in den {
        acc -= log_gamma(d)?;
    }
    if acc.re > 709.0 {
        return Err(Error::NonFinite("gamma_ratio"));
    }
    Ok(acc.exp())
}

/// Γ(1 - z) Γ(z) = π / sin(π z), used where both factors appear together.
pub fn reflection_product(z: Complex64) -> Result<Complex64> {
    if integer_distance(z) == 0.0 {
        return Err(Error::Pole {
            function: "reflection_product",
            at: z,
        });
    }
    finite("reflection_product", PI / (z * PI).sin())
}
