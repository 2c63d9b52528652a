//! Regular and second solutions of the three-term recurrence.
//!
//! Everything is written in the normalized form
//!
//! ζ n w_{n−1} + (1 + (1+ζ) n − i(1−ζ) τ) w_n + (n+1) w_{n+1} = 0,
//!
//! which is the physical recurrence divided through by (b + C/2b + ik·root)
//! after the substitution w_n → θⁿ w_n. At C = 0 it is the physical
//! recurrence itself (τ = t, θ = 1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::operators::{derive_params, DerivedParams, PhysicalParams};
use crate::quadrature::{integrate_adaptive, wynn_epsilon};
use crate::special::{gamma, gamma_ratio, gauss_2f1, gauss_2f1_via, kummer_1f1, principal_power, Route};

/// Below this value of |τ|·|1−ζ| the second solution is built upward from
/// its closed-form first element; above it, downward from two integral
/// values.
pub const UPWARD_LIMIT: f64 = 3.0;

/// Relative tolerance for the agreement between the upward recurrence and
/// the closed form of the regular solution.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Diagonal coefficient 1 + (1+ζ)n − i(1−ζ)τ of the normalized recurrence.
fn diagonal(n: usize, tau: Complex64, zeta: Complex64) -> Complex64 {
    1.0 + (1.0 + zeta) * n as f64 - I * (1.0 - zeta) * tau
}

fn check_inputs(tau: Complex64, zeta: Complex64) -> Result<()> {
    if !(tau.re.is_finite() && tau.im.is_finite() && zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(Error::Domain("recurrence arguments must be finite".into()));
    }
    if zeta.norm() == 0.0 {
        return Err(Error::Domain("zeta must be nonzero".into()));
    }
    Ok(())
}

/// p_n(τ; ζ) from the closed form
/// ((−1)ⁿ/n!) (1−iτ)_n ₂F₁(−n, iτ; −n+iτ; ζ).
pub fn regular_closed_form(n: usize, tau: Complex64, zeta: Complex64) -> Result<Complex64> {
    check_inputs(tau, zeta)?;
    let mut prefactor = c(1.0);
    for j in 0..n {
        prefactor *= (1.0 + j as f64 - I * tau) / (j as f64 + 1.0);
    }
    if n % 2 == 1 {
        prefactor = -prefactor;
    }
    let nf = -(n as f64);
    let f = gauss_2f1_via(c(nf), I * tau, nf + I * tau, zeta, Route::Terminating)?;
    finite("regular_closed_form", prefactor * f)
}

/// p_0..p_{n_max} by the upward recurrence from p_0 = 1, cross-checked
/// against the closed form at the top index.
pub fn regular_solution(tau: Complex64, zeta: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    let values = regular_upward(tau, zeta, n_max)?;
    let top = values[n_max];
    let closed = regular_closed_form(n_max, tau, zeta)?;
    let scale = closed.norm().max(top.norm()).max(f64::MIN_POSITIVE);
    if (top - closed).norm() > CLOSED_FORM_TOLERANCE * scale {
        return Err(Error::Consistency(format!(
            "regular solution: recurrence {top} and closed form {closed} disagree at n = {n_max}"
        )));
    }
    Ok(values)
}

/// Upward recurrence only, without the closed-form check.
pub fn regular_upward(tau: Complex64, zeta: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    check_inputs(tau, zeta)?;
    let mut p = Vec::with_capacity(n_max + 2);
    p.push(c(1.0));
    p.push(-diagonal(0, tau, zeta));
    for n in 1..n_max {
        let next = -(zeta * n as f64 * p[n - 1] + diagonal(n, tau, zeta) * p[n]) / (n as f64 + 1.0);
        p.push(next);
    }
    p.truncate(n_max + 1);
    if p.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite("regular solution"));
    }
    Ok(p)
}

/// Representations of the second solution q_n(τ; ζ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecondForm {
    /// −n! Γ(1−iτ)/Γ(n+2−iτ) (−ζ)^{n+1} ₂F₁(1−iτ, n+1; n+2−iτ; ζ)
    Gauss,
    /// The same prefactor with z′^{n+1} ₂F₁(n+1, n+1; n+2−iτ; z′), z′ = ζ/(ζ−1)
    Pfaff,
    /// Connection to argument 1/ζ, written with the regular solution:
    /// −n! Γ(−n−iτ)/Γ(1−iτ) ₂F₁(iτ, n+1; n+1+iτ; 1/ζ) − Γ(1−iτ)Γ(iτ)(−ζ)^{iτ} p_n
    Kummer,
    /// Euler-type integral along a ray in the right half plane.
    Integral,
}

pub fn second_closed_form(n: usize, tau: Complex64, zeta: Complex64, form: SecondForm) -> Result<Complex64> {
    check_inputs(tau, zeta)?;
    let nf = n as f64;
    let value = match form {
        SecondForm::Gauss => {
            let pre = gamma_ratio(&[c(nf + 1.0), 1.0 - I * tau], &[nf + 2.0 - I * tau])?;
            let f = gauss_2f1(1.0 - I * tau, c(nf + 1.0), nf + 2.0 - I * tau, zeta)?;
            -pre * (-zeta).powi(n as i32 + 1) * f
        }
        SecondForm::Pfaff => {
            let pre = gamma_ratio(&[c(nf + 1.0), 1.0 - I * tau], &[nf + 2.0 - I * tau])?;
            let z = zeta / (zeta - 1.0);
            let f = gauss_2f1(c(nf + 1.0), c(nf + 1.0), nf + 2.0 - I * tau, z)?;
            -pre * z.powi(n as i32 + 1) * f
        }
        SecondForm::Kummer => {
            let pre = gamma_ratio(&[c(nf + 1.0), -nf - I * tau], &[1.0 - I * tau])?;
            let f = gauss_2f1(I * tau, c(nf + 1.0), nf + 1.0 + I * tau, zeta.inv())?;
            let weight = gamma(1.0 - I * tau)? * gamma(I * tau)? * principal_power(-zeta, I * tau)?;
            -pre * f - weight * regular_closed_form(n, tau, zeta)?
        }
        SecondForm::Integral => second_integral(n, tau, zeta)?,
    };
    finite("second_closed_form", value)
}

/// q_n = ∫₀^∞ [−ζ(1−e^{−s})/(1−ζe^{−s})]ⁿ ζe^{−s}/(1−ζe^{−s}) e^{iτs} ds,
/// taken along s = r e^{iφ} with φ tilted toward the decay of e^{iτs}.
pub fn second_integral(n: usize, tau: Complex64, zeta: Complex64) -> Result<Complex64> {
    check_inputs(tau, zeta)?;
    let angle = std::f64::consts::FRAC_PI_4 * (2.0 * tau.re).tanh();
    let dir = Complex64::from_polar(1.0, angle);
    let decay = ((1.0 - I * tau) * dir).re;
    if decay <= 0.0 {
        return Err(Error::Domain(format!("integral representation diverges at tau = {tau}")));
    }
    let integrand = |r: f64| {
        let s = dir * r;
        let w = (-s).exp();
        let den = 1.0 - zeta * w;
        let one_minus_w = 2.0 * (-0.5 * s).exp() * (0.5 * s).sinh();
        let base = -zeta * one_minus_w / den;
        base.powi(n as i32) * zeta * w / den * (I * tau * s).exp() * dir
    };
    let width = 2.0 / decay;
    let peak = (n as f64 + 1.0) / decay;
    let mut total = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for panel in 0..2000 {
        let a = panel as f64 * width;
        let (v, _) = integrate_adaptive(integrand, a, a + width, 1e-17 * total.norm(), 1e-14)?;
        total += v;
        if a > peak && v.norm() <= 1e-17 * total.norm() {
            quiet += 1;
            if quiet >= 2 {
                return finite("second_integral", total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "second-solution integral tail",
        achieved: total.norm(),
    })
}

/// q_0..q_{n_max}. For |τ||1−ζ| ≤ [`UPWARD_LIMIT`] the first element
/// comes from the Gauss form and the rest from the upward recurrence;
/// otherwise the two top elements come from the integral and the
/// recurrence is run downward, the direction in which q is dominant.
pub fn second_solution(tau: Complex64, zeta: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    check_inputs(tau, zeta)?;
    let scale = tau.norm() * (1.0 - zeta).norm();
    let q = if scale <= UPWARD_LIMIT {
        let mut q = Vec::with_capacity(n_max + 2);
        let q0 = second_closed_form(0, tau, zeta, SecondForm::Gauss)?;
        q.push(q0);
        q.push(zeta - diagonal(0, tau, zeta) * q0);
        for n in 1..n_max {
            let next = -(zeta * n as f64 * q[n - 1] + diagonal(n, tau, zeta) * q[n]) / (n as f64 + 1.0);
            q.push(next);
        }
        q.truncate(n_max + 1);
        q
    } else {
        let top = n_max.max(1);
        let mut q = vec![Complex64::new(0.0, 0.0); top + 1];
        q[top] = second_integral(top, tau, zeta)?;
        q[top - 1] = second_integral(top - 1, tau, zeta)?;
        for n in (1..top).rev() {
            q[n - 1] = -((n as f64 + 1.0) * q[n + 1] + diagonal(n, tau, zeta) * q[n]) / (zeta * n as f64);
        }
        q.truncate(n_max + 1);
        q
    };
    if q.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite("second solution"));
    }
    Ok(q)
}

/// Regular solution p_n(τ(t); ζ) at the parameter point (p_n(t; ζ) when C = 0).
pub fn p_sequence(p: &PhysicalParams, n_max: usize) -> Result<Vec<Complex64>> {
    let d = derive_params(p)?;
    regular_solution(d.tau_of(p.t), d.zeta, n_max)
}

/// Second solution q_n(τ(t); ζ) at the parameter point.
pub fn q_sequence(p: &PhysicalParams, n_max: usize) -> Result<Vec<Complex64>> {
    let d = derive_params(p)?;
    second_solution(d.tau_of(p.t), d.zeta, n_max)
}

/// Solutions of the physical recurrence with their Wronskian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionPair {
    /// s_n = θⁿ p_n(τ; ζ)
    pub regular: Vec<Complex64>,
    /// c_n = θ^{n+1} q_n(τ; ζ)
    pub second: Vec<Complex64>,
    pub wronskian: Complex64,
    pub params: PhysicalParams,
    pub t: f64,
}

/// Scales p and q by powers of θ into solutions of the physical recurrence.
pub(crate) fn scale_by_theta(d: &DerivedParams, p: &[Complex64], q: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut pow = c(1.0);
    let mut s = Vec::with_capacity(p.len());
    let mut cc = Vec::with_capacity(q.len());
    for (pn, qn) in p.iter().zip(q) {
        s.push(pow * pn);
        pow *= d.theta;
        cc.push(pow * qn);
    }
    (s, cc)
}

pub fn s_c_sequences(p: &PhysicalParams, n_max: usize) -> Result<SolutionPair> {
    let d = derive_params(p)?;
    let tau = d.tau_of(p.t);
    let pv = regular_solution(tau, d.zeta, n_max)?;
    let qv = second_solution(tau, d.zeta, n_max)?;
    let (regular, second) = scale_by_theta(&d, &pv, &qv);
    let mut pair = SolutionPair {
        regular,
        second,
        wronskian: d.wronskian_constant(),
        params: *p,
        t: p.t,
    };
    if n_max >= 1 {
        pair.wronskian = wronskian(&pair, 1)?;
    }
    Ok(pair)
}

/// α_n (second_n regular_{n−1} − second_{n−1} regular_n) with the
/// symmetrized coupling α_n = d_n / χ^{n−1}.
pub fn wronskian(pair: &SolutionPair, n: usize) -> Result<Complex64> {
    if n == 0 || n >= pair.regular.len() || n >= pair.second.len() {
        return Err(Error::Dimension(format!(
            "Wronskian index {n} outside 1..={}",
            pair.regular.len().min(pair.second.len()).saturating_sub(1)
        )));
    }
    let d = derive_params(&pair.params)?;
    let dn = Complex64::new(d.b - d.c / (2.0 * d.b), d.k) * n as f64;
    let alpha = dn / d.chi.powi(n as i32 - 1);
    let (s, q) = (&pair.regular, &pair.second);
    Ok(alpha * (q[n] * s[n - 1] - q[n - 1] * s[n]))
}

/// q̃_n = q_n + y p_n.
pub fn gauge_shift(second: &[Complex64], regular: &[Complex64], y: Complex64) -> Vec<Complex64> {
    second.iter().zip(regular).map(|(q, p)| q + y * p).collect()
}

/// Closed-form solution e^{λξ} ₁F₁(iτ, 1; −iγξ) of the one-dimensional
/// equation whose basis coefficients are proportional to s_n.
pub fn reference_solution(d: &DerivedParams, t: f64, xi: f64) -> Result<Complex64> {
    let tau = d.tau_of(t);
    Ok((d.lambda * xi).exp() * kummer_1f1(I * tau, c(1.0), -I * d.gamma * xi)?)
}

/// Common factor relating the basis coefficients of the reference solution
/// to s_n: √(2b)/(b−λ) ((b−λ+iγ)/(b−λ))^{−iτ}; at C = 0 this is
/// √(2/b) ((ζ+1)/2)^{it}.
pub fn expansion_factor(d: &DerivedParams, t: f64) -> Result<Complex64> {
    let tau = d.tau_of(t);
    let bl = d.b - d.lambda;
    Ok((2.0 * d.b).sqrt() / bl * principal_power((bl + I * d.gamma) / bl, -I * tau)?)
}

/// √(2b) e^{−bξ} L_n(2bξ) for n = 0..count−1, with the exponential carried
/// through the recurrence so that nothing overflows.
pub fn basis_functions(b: f64, xi: f64, count: usize) -> Result<Vec<f64>> {
    let x = 2.0 * b * xi;
    let scale = (2.0 * b).sqrt() * (-0.5 * x).exp();
    let mut phi = Vec::with_capacity(count + 1);
    phi.push(scale);
    phi.push(scale * (1.0 - x));
    for n in 1..count {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - x) * phi[n] - nf * phi[n - 1]) / (nf + 1.0);
        phi.push(next);
    }
    phi.truncate(count);
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Laguerre basis functions"));
    }
    Ok(phi)
}

/// Largest deviation, over the grid, between the reference solution and its
/// basis expansion with coefficients factor·s_n, n < `terms`. The reference
/// solution is not square integrable, so the partial sums converge only in
/// a summability sense; they are resummed with Wynn's ε-algorithm.
pub fn expansion_check(p: &PhysicalParams, terms: usize, grid: &[f64]) -> Result<f64> {
    if terms == 0 {
        return Err(Error::Dimension("expansion needs at least one term".into()));
    }
    let d = derive_params(p)?;
    let factor = expansion_factor(&d, p.t)?;
    let pv = regular_solution(d.tau_of(p.t), d.zeta, terms)?;
    let mut coef = Vec::with_capacity(terms);
    let mut pow = c(1.0);
    for pn in pv.iter().take(terms) {
        coef.push(factor * pow * pn);
        pow *= d.theta;
    }
    let mut worst: f64 = 0.0;
    for &xi in grid {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::Domain(format!("grid point {xi} must be finite and nonnegative")));
        }
        let phi = basis_functions(d.b, xi, terms)?;
        let mut acc = Complex64::new(0.0, 0.0);
        let sums: Vec<Complex64> = coef
            .iter()
            .zip(&phi)
            .map(|(cn, f)| {
                acc += cn * f;
                acc
            })
            .collect();
        let approx = wynn_epsilon(&sums);
        let exact = reference_solution(&d, p.t, xi)?;
        worst = worst.max((approx - exact).norm());
    }
    Ok(worst)
}
