//! Confluent hypergeometric function M(a, b; z) = 1F1(a; b; z).

use num_complex::Complex64;

use super::continuation::LinearOde2;
use super::gamma::{is_nonpositive_integer, rgamma, gamma};
use crate::error::{finite, Error, Result};

const MAX_SERIES_TERMS: usize = 20_000;

/// Beyond this modulus the series is abandoned for the asymptotic expansion
/// or for continuation.
const SERIES_RADIUS: f64 = 1.0;

/// Longest continuation step.
const MAX_STEP: f64 = 2.0;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn terminating_order(a: Complex64) -> Option<usize> {
    is_nonpositive_integer(a).then(|| (-a.re) as usize)
}

fn series(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = c(1.0);
    let mut sum = term;
    let limit = terminating_order(a).unwrap_or(MAX_SERIES_TERMS);
    let mut small_run = 0;
    for j in 0..limit {
        let jf = j as f64;
        term *= (a + jf) / ((b + jf) * (jf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small_run += 1;
            if small_run >= 2 && jf > a.norm() + b.norm() + z.norm() {
                return finite("kummer_1f1 series", sum);
            }
        } else {
            small_run = 0;
        }
    }
    if terminating_order(a).is_some() {
        return finite("kummer_1f1 series", sum);
    }
    Err(Error::NonConvergence {
        what: "kummer_1f1 series",
        achieved: term.norm() / sum.norm().max(1e-300),
    })
}

/// Sum of an asymptotic series up to its smallest term; `None` if the
/// smallest term is not negligible.
fn asymptotic_sum(p: Complex64, q: Complex64, x: Complex64) -> Option<Complex64> {
    let mut term = c(1.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for s in 0..500 {
        let sf = s as f64;
        term *= (p + sf) * (q + sf) / (sf + 1.0) * x;
        let size = term.norm();
        if size == 0.0 {
            return Some(sum);
        }
        if size > last {
            return None;
        }
        sum += term;
        if size <= 1e-16 * sum.norm() {
            return Some(sum);
        }
        last = size;
    }
    None
}

/// Large-|z| expansion for Re z >= 0.
fn asymptotic(a: Complex64, b: Complex64, z: Complex64) -> Result<Option<Complex64>> {
    let Some(s1) = asymptotic_sum(1.0 - a, b - a, z.inv()) else {
        return Ok(None);
    };
    let Some(s2) = asymptotic_sum(a, a - b + 1.0, -z.inv()) else {
        return Ok(None);
    };
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let gb = gamma(b)?;
    let first = gb * rgamma(a)? * (z + (a - b) * z.ln()).exp() * s1;
    let phase = (Complex64::i() * std::f64::consts::PI * sign * a).exp();
    let second = gb * rgamma(b - a)? * phase * (-a * z.ln()).exp() * s2;
    Ok(Some(first + second))
}

fn continuation(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let z0 = z * (SERIES_RADIUS / z.norm());
    let w0 = series(a, b, z0)?;
    let dw0 = a / b * series(a + 1.0, b + 1.0, z0)?;
    let ode = LinearOde2::kummer(a, b);
    let (w, _) = ode.continue_segment(z0, w0, dw0, z, |p| p.norm(), MAX_STEP)?;
    Ok(w)
}

/// Kummer's function M(a, b; z) for complex arguments.
pub fn kummer_1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    for (name, v) in [("a", a), ("b", b), ("z", z)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain(format!("1F1 argument {name} = {v} is not finite")));
        }
    }
    if is_nonpositive_integer(b) {
        let ok = terminating_order(a).is_some_and(|m| m <= (-b.re) as usize);
        if !ok {
            return Err(Error::Pole {
                function: "kummer_1f1",
                at: b,
            });
        }
    }
    if a.norm() == 0.0 || z.norm() == 0.0 {
        return Ok(c(1.0));
    }
    if terminating_order(a).is_some() {
        return series(a, b, z);
    }
    if z.re < 0.0 {
        // Kummer's transformation keeps the exponential growth in a prefactor
        let inner = if terminating_order(b - a).is_some() {
            series(b - a, b, -z)?
        } else {
            positive_half_plane(b - a, b, -z)?
        };
        return finite("kummer_1f1", z.exp() * inner);
    }
    positive_half_plane(a, b, z)
}

fn positive_half_plane(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let value = if z.norm() <= SERIES_RADIUS {
        series(a, b, z)?
    } else if let Some(v) = asymptotic(a, b, z)? {
        v
    } else {
        continuation(a, b, z)?
    };
    finite("kummer_1f1", value)
}
