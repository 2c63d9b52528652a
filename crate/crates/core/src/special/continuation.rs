//! Analytic continuation of solutions of
//!
//! ```text
//! P(z) w'' + Q(z) w' + R w = 0,   deg P <= 2, deg Q <= 1
//! ```
//!
//! by re-expanding the solution in a Taylor series at successive points of a
//! straight path. Each step stays within half the local radius of
//! convergence, so the series converge geometrically and no step has to sum
//! an alternating tail.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 4000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct LinearOde2 {
    /// P(z) = p[0] + p[1] z + p[2] z^2
    pub p: [Complex64; 3],
    /// Q(z) = q[0] + q[1] z
    pub q: [Complex64; 2],
    pub r: Complex64,
}

impl LinearOde2 {
    /// Gauss hypergeometric equation z(1-z)w'' + [c - (a+b+1)z]w' - ab w = 0.
    pub fn hypergeometric(a: Complex64, b: Complex64, c: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            p: [Complex64::new(0.0, 0.0), one, -one],
            q: [c, -(a + b + 1.0)],
            r: -(a * b),
        }
    }

    /// Kummer equation z w'' + (b - z) w' - a w = 0.
    pub fn kummer(a: Complex64, b: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            p: [Complex64::new(0.0, 0.0), one, Complex64::new(0.0, 0.0)],
            q: [b, -one],
            r: -a,
        }
    }

    /// Advances (w, w') from `z0` to `z0 + h`.
    fn step(&self, z0: Complex64, w: Complex64, dw: Complex64, h: Complex64) -> Result<(Complex64, Complex64)> {
        let p0 = self.p[0] + z0 * (self.p[1] + z0 * self.p[2]);
        let p1 = self.p[1] + 2.0 * self.p[2] * z0;
        let p2 = self.p[2];
        let q0 = self.q[0] + self.q[1] * z0;
        let q1 = self.q[1];
        if p0.norm() == 0.0 {
            return Err(Error::Domain("continuation step starts at a singular point".into()));
        }

        // d_j = c_j h^j, the j-th Taylor term evaluated at the step end.
        let mut d_prev = w;
        let mut d_cur = dw * h;
        let mut sum = d_prev + d_cur;
        let mut dsum = d_cur;
        let mut small_run = 0;
        for j in 0..MAX_TERMS {
            let jf = j as f64;
            let num = (p1 * jf + q0) * (jf + 1.0) * d_cur * h
                + (p2 * (jf * (jf - 1.0)) + q1 * jf + self.r) * d_prev * h * h;
            let d_next = -num / (p0 * ((jf + 2.0) * (jf + 1.0)));
            sum += d_next;
            dsum += d_next * (jf + 2.0);
            let scale = sum.norm().max(1e-300);
            if d_next.norm() <= 1e-17 * scale && d_cur.norm() <= 1e-17 * scale {
                small_run += 1;
                if small_run >= 3 && j >= 4 {
                    if !(sum.re.is_finite() && sum.im.is_finite()) {
                        return Err(Error::NonFinite("taylor continuation"));
                    }
                    return Ok((sum, dsum / h));
                }
            } else {
                small_run = 0;
            }
            d_prev = d_cur;
            d_cur = d_next;
        }
        Err(Error::NonConvergence {
            what: "taylor continuation step",
            achieved: d_cur.norm() / sum.norm().max(1e-300),
        })
    }

    /// Carries (w, w') along the straight segment from `from` to `to`.
    ///
    /// `radius` gives the distance from a point to the nearest singularity of
    /// the equation; `max_step` caps the step length.
    pub fn continue_segment(
        &self,
        from: Complex64,
        w: Complex64,
        dw: Complex64,
        to: Complex64,
        radius: impl Fn(Complex64) -> f64,
        max_step: f64,
    ) -> Result<(Complex64, Complex64)> {
        let mut z = from;
        let (mut w, mut dw) = (w, dw);
        let mut steps = 0;
        loop {
            let remaining = to - z;
            let dist = remaining.norm();
            if dist == 0.0 {
                return Ok((w, dw));
            }
            let rad = radius(z);
            if rad <= 1e-12 {
                return Err(Error::Domain("continuation path touches a singular point".into()));
            }
            let len = dist.min(0.5 * rad).min(max_step);
            let h = if len >= dist { remaining } else { remaining * (len / dist) };
            let (nw, ndw) = self.step(z, w, dw, h)?;
            w = nw;
            dw = ndw;
            z = if len >= dist { to } else { z + h };
            steps += 1;
            if steps > 10_000 {
                return Err(Error::NonConvergence {
                    what: "taylor continuation path",
                    achieved: dist,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kummer_with_a_equal_b_is_exponential() {
        // 1F1(b; b; z) = e^z
        let b = Complex64::new(1.3, 0.2);
        let ode = LinearOde2::kummer(b, b);
        let z0 = Complex64::new(0.5, 0.5);
        let target = Complex64::new(3.0, 7.0);
        let (w, dw) = ode
            .continue_segment(z0, z0.exp(), z0.exp(), target, |z| z.norm(), 2.0)
            .unwrap();
        assert!((w - target.exp()).norm() < 1e-13 * target.exp().norm());
        assert!((dw - target.exp()).norm() < 1e-13 * target.exp().norm());
    }

    #[test]
    fn hypergeometric_reproduces_binomial() {
        // 2F1(a, b; b; z) = (1 - z)^{-a}
        let a = Complex64::new(0.7, -0.4);
        let b = Complex64::new(2.0, 0.3);
        let ode = LinearOde2::hypergeometric(a, b, b);
        let f = |z: Complex64| (1.0 - z).powc(-a);
        let df = |z: Complex64| a * (1.0 - z).powc(-a - 1.0);
        let z0 = Complex64::new(0.3, 0.1);
        let target = Complex64::new(0.6, 0.9);
        let radius = |z: Complex64| z.norm().min((1.0 - z).norm());
        let (w, _) = ode
            .continue_segment(z0, f(z0), df(z0), target, radius, 1.0)
            .unwrap();
        assert!((w - f(target)).norm() < 1e-14 * f(target).norm());
    }
}
