//! Gauss hypergeometric function 2F1(a, b; c; z) for complex parameters.
//!
//! Evaluation picks, among the linear fractional maps z, z/(z-1), 1-z,
//! 1-1/z, 1/z and 1/(1-z), the one with the smallest mapped modulus. When
//! that is still above [`SERIES_LIMIT`] (the unit-circle belt around
//! e^{±iπ/3}, or a logarithmic case where the connection formulas
//! degenerate) the value is carried from a safe point by Taylor
//! continuation of the hypergeometric equation.

use num_complex::Complex64;

use super::continuation::LinearOde2;
use super::gamma::{gamma_ratio, integer_distance, is_nonpositive_integer};
use crate::error::{finite, Error, Result};

/// Largest mapped |argument| accepted for direct summation.
pub const SERIES_LIMIT: f64 = 0.8;

/// Connection formulas are skipped when the relevant parameter combination
/// is within this distance of an integer.
const DEGENERACY_GAP: f64 = 0.1;

const MAX_SERIES_TERMS: usize = 20_000;

/// Evaluation strategy for [`gauss_2f1_via`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Finite sum; `a` or `b` is a non-positive integer.
    Terminating,
    /// Defining power series in z.
    Direct,
    /// Pfaff transformation, series in z/(z-1).
    Pfaff,
    /// Connection to the neighbourhood of z = 1 (series in 1-z or 1-1/z).
    OneMinusZ,
    /// Connection to the neighbourhood of infinity (series in 1/z or 1/(1-z)).
    Reciprocal,
    /// Taylor continuation of the differential equation from |z| = 1/2.
    Continuation,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn terminating_order(a: Complex64, b: Complex64) -> Option<usize> {
    [a, b]
        .into_iter()
        .filter(|&x| is_nonpositive_integer(x))
        .map(|x| (-x.re) as usize)
        .min()
}

fn check_c(a: Complex64, b: Complex64, cc: Complex64) -> Result<()> {
    if is_nonpositive_integer(cc) {
        let allowed = terminating_order(a, b).is_some_and(|m| m <= (-cc.re) as usize);
        if !allowed {
            return Err(Error::Pole {
                function: "gauss_2f1",
                at: cc,
            });
        }
    }
    Ok(())
}

fn terminating_sum(a: Complex64, b: Complex64, cc: Complex64, z: Complex64, m: usize) -> Complex64 {
    let mut term = c(1.0);
    let mut sum = term;
    for j in 0..m {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((cc + jf) * (jf + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Plain power series; requires |z| < 1.
fn series(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    if let Some(m) = terminating_order(a, b) {
        return Ok(terminating_sum(a, b, cc, z, m));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("2F1 series used outside the unit disk (z = {z})")));
    }
    let mut term = c(1.0);
    let mut sum = term;
    let mut small_run = 0;
    for j in 0..MAX_SERIES_TERMS {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((cc + jf) * (jf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small_run += 1;
            // the term ratio tends to |z| < 1, so two small terms in a row
            // past the parameter hump mean the tail is negligible
            if small_run >= 2 && jf > (a.norm() + b.norm() + cc.norm()) {
                return finite("gauss_2f1 series", sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "gauss_2f1 series",
        achieved: term.norm() / sum.norm().max(1e-300),
    })
}

/// Series in w or in w/(w-1), whichever is smaller.
fn near_origin(a: Complex64, b: Complex64, cc: Complex64, w: Complex64) -> Result<Complex64> {
    if terminating_order(a, b).is_some() || w.norm() <= (w / (w - 1.0)).norm() {
        series(a, b, cc, w)
    } else {
        pfaff(a, b, cc, w)
    }
}

fn pfaff(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    let w = z / (z - 1.0);
    Ok((1.0 - z).powc(-a) * series(a, cc - b, cc, w)?)
}

fn one_minus_z(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    let s = cc - a - b;
    if integer_distance(s) < 1e-12 {
        return Err(Error::Domain("1-z connection is degenerate for integer c-a-b".into()));
    }
    let w = 1.0 - z;
    let first = gamma_ratio(&[cc, s], &[cc - a, cc - b])? * near_origin(a, b, 1.0 - s, w)?;
    let second = gamma_ratio(&[cc, -s], &[a, b])?;
    let second = if second.norm() == 0.0 {
        second
    } else {
        second * w.powc(s) * near_origin(cc - a, cc - b, s + 1.0, w)?
    };
    Ok(first + second)
}

fn reciprocal(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    let d = b - a;
    if integer_distance(d) < 1e-12 {
        return Err(Error::Domain("1/z connection is degenerate for integer a-b".into()));
    }
    let w = z.inv();
    let mz = -z;
    let first = gamma_ratio(&[cc, d], &[b, cc - a])?;
    let first = if first.norm() == 0.0 {
        first
    } else {
        first * mz.powc(-a) * near_origin(a, a - cc + 1.0, 1.0 - d, w)?
    };
    let second = gamma_ratio(&[cc, -d], &[a, cc - b])?;
    let second = if second.norm() == 0.0 {
        second
    } else {
        second * mz.powc(-b) * near_origin(b, b - cc + 1.0, 1.0 + d, w)?
    };
    Ok(first + second)
}

fn continuation(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() <= 0.5 {
        return series(a, b, cc, z);
    }
    let z0 = z * (0.5 / z.norm());
    let w0 = series(a, b, cc, z0)?;
    let dw0 = a * b / cc * series(a + 1.0, b + 1.0, cc + 1.0, z0)?;
    let ode = LinearOde2::hypergeometric(a, b, cc);
    let radius = |p: Complex64| p.norm().min((1.0 - p).norm());
    let (w, _) = ode.continue_segment(z0, w0, dw0, z, radius, 0.5)?;
    finite("gauss_2f1 continuation", w)
}

fn on_branch_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

/// Route chosen by [`gauss_2f1`] for the given arguments.
pub fn select_route(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Route {
    if terminating_order(a, b).is_some() {
        return Route::Terminating;
    }
    let mut best = (Route::Direct, z.norm());
    let mut consider = |route, modulus: f64| {
        if modulus < best.1 {
            best = (route, modulus);
        }
    };
    consider(Route::Pfaff, (z / (z - 1.0)).norm());
    if integer_distance(cc - a - b) > DEGENERACY_GAP {
        let w = 1.0 - z;
        consider(Route::OneMinusZ, w.norm().min((w / (w - 1.0)).norm()));
    }
    if integer_distance(a - b) > DEGENERACY_GAP {
        let w = z.inv();
        consider(Route::Reciprocal, w.norm().min((w / (w - 1.0)).norm()));
    }
    if best.1 <= SERIES_LIMIT {
        best.0
    } else {
        Route::Continuation
    }
}

/// 2F1(a, b; c; z) on the principal branch (cut along [1, ∞)).
pub fn gauss_2f1(a: Complex64, b: Complex64, cc: Complex64, z: Complex64) -> Result<Complex64> {
    gauss_2f1_via(a, b, cc, z, select_route(a, b, cc, z))
}

/// 2F1 evaluated through a specific route. Routes whose series would not
/// converge at the mapped argument return an error instead of a value.
pub fn gauss_2f1_via(a: Complex64, b: Complex64, cc: Complex64, z: Complex64, route: Route) -> Result<Complex64> {
    for (name, v) in [("a", a), ("b", b), ("c", cc), ("z", z)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain(format!("2F1 argument {name} = {v} is not finite")));
        }
    }
    check_c(a, b, cc)?;
    if z.norm() == 0.0 {
        return Ok(c(1.0));
    }
    if let Some(m) = terminating_order(a, b) {
        return Ok(terminating_sum(a, b, cc, z, m));
    }
    if route == Route::Terminating {
        return Err(Error::Domain("2F1 series does not terminate".into()));
    }
    if on_branch_cut(z) {
        return Err(Error::Domain(format!("2F1 argument {z} lies on the branch cut [1, inf)")));
    }
    let value = match route {
        Route::Terminating => unreachable!(),
        Route::Direct => series(a, b, cc, z)?,
        Route::Pfaff => pfaff(a, b, cc, z)?,
        Route::OneMinusZ => one_minus_z(a, b, cc, z)?,
        Route::Reciprocal => reciprocal(a, b, cc, z)?,
        Route::Continuation => continuation(a, b, cc, z)?,
    };
    finite("gauss_2f1", value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() <= tol * y.norm().max(1.0)
    }

    #[test]
    fn zero_argument_is_one() {
        let v = gauss_2f1(cx(1.2, 3.0), cx(-0.5, 2.0), cx(0.3, -1.0), cx(0.0, 0.0)).unwrap();
        assert_eq!(v, cx(1.0, 0.0));
    }

    #[test]
    fn elementary_closed_forms() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        for z in [cx(0.3, 0.2), cx(-2.0, 1.0), cx(0.5, 0.8660254037844386), cx(3.0, -0.5)] {
            let expect = -(1.0 - z).ln() / z;
            let got = gauss_2f1(cx(1.0, 0.0), cx(1.0, 0.0), cx(2.0, 0.0), z).unwrap();
            assert!(close(got, expect, 1e-13), "z={z}: {got} vs {expect}");
        }
        // 2F1(a,b;b;z) = (1-z)^{-a}
        let a = cx(0.4, -1.1);
        for z in [cx(0.9, 0.5), cx(-5.0, 2.0), cx(0.5, -0.87)] {
            let expect = (1.0 - z).powc(-a);
            let got = gauss_2f1(a, cx(2.5, 0.5), cx(2.5, 0.5), z).unwrap();
            assert!(close(got, expect, 1e-12), "z={z}: {got} vs {expect}");
        }
    }

    #[test]
    fn pole_in_c_without_termination_is_error() {
        let r = gauss_2f1(cx(0.5, 0.0), cx(1.0, 0.0), cx(-2.0, 0.0), cx(0.3, 0.0));
        assert!(matches!(r, Err(Error::Pole { .. })));
        // terminating before the zero denominator is fine
        assert!(gauss_2f1(cx(-2.0, 0.0), cx(1.0, 0.0), cx(-2.0, 0.0), cx(0.3, 0.0)).is_ok());
    }

    #[test]
    fn routes_agree_where_they_converge() {
        let (a, b, cc) = (cx(0.3, 0.7), cx(1.1, -0.2), cx(2.4, 0.9));
        let z = cx(0.35, -0.25);
        let reference = gauss_2f1_via(a, b, cc, z, Route::Direct).unwrap();
        for route in [Route::Pfaff, Route::OneMinusZ, Route::Continuation] {
            let v = gauss_2f1_via(a, b, cc, z, route).unwrap();
            assert!(close(v, reference, 1e-12), "{route:?}: {v} vs {reference}");
        }
        let z = cx(-3.0, 2.0);
        let r1 = gauss_2f1_via(a, b, cc, z, Route::Reciprocal).unwrap();
        let r2 = gauss_2f1_via(a, b, cc, z, Route::Pfaff).unwrap();
        let r3 = gauss_2f1_via(a, b, cc, z, Route::Continuation).unwrap();
        assert!(close(r1, r2, 1e-12));
        assert!(close(r1, r3, 1e-12));
    }

    #[test]
    fn branch_cut_rejected() {
        let r = gauss_2f1(cx(0.5, 0.0), cx(0.5, 0.0), cx(2.0, 0.0), cx(2.0, 0.0));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let cases = [
            ((0.3, 0.7), (1.1, -0.2), (2.4, 0.5), (0.5, 0.85), (0.782_108_136_216_491_4, 0.249_354_827_167_486_3)),
            ((1.0, -0.8), (3.0, 0.0), (0.0, 3.8), (-0.5, 0.9), (2.375_259_998_098_33, 1.383_546_547_968_571)),
            ((0.0, 0.5), (1.0, 0.0), (1.2, 0.0), (0.5, -0.866_025_4), (1.561_983_252_687_079, 0.029_224_437_261_858_955)),
            ((2.0, 0.0), (0.0, -0.3), (1.5, 0.4), (-7.0, -3.0), (0.741_654_297_329_991, 0.652_001_416_979_575_1)),
        ];
        for (a, b, cc, z, want) in cases {
            let got = gauss_2f1(cx(a.0, a.1), cx(b.0, b.1), cx(cc.0, cc.1), cx(z.0, z.1)).unwrap();
            assert!(close(got, cx(want.0, want.1), 1e-12), "{got} vs {want:?}");
        }
    }
}
