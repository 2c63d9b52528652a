use num_complex::Complex64;

use crate::error::{Error, Result};

/// Principal-branch power `base^exponent` = exp(exponent * Log base), with
/// arg(base) in (-π, π].
pub fn principal_power(base: Complex64, exponent: Complex64) -> Result<Complex64> {
    if base.norm() == 0.0 {
        if exponent.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!("0^{exponent} is undefined")));
    }
    let v = (exponent * base.ln()).exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("principal_power"))
    }
}
