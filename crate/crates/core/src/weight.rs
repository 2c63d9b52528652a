//! Weight function of the regular solutions, its normalization integral,
//! the Gram matrix, and the integral of the one-dimensional Green's matrix
//! over t. Owns the principal-value quadrature.
//!
//! Contour integrals along the real line indented below t = 0 are reduced
//! to a principal value plus a half residue. With Res ρ = −1/(2π) at t = 0,
//! ∫_C ρ h dt = PV∫ ρ h dt − (i/2) h(0).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{finite, Error, Result};
use crate::operators::{derive_params, PhysicalParams};
use crate::quadrature::{neville_to_zero, GaussLegendre};
use crate::recurrence::{regular_solution, regular_upward, second_solution};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// How the principal value is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PvMethod {
    /// ∫₀^∞ [f(t) + f(−t)] dt; the odd pole part cancels pointwise.
    Folded,
    /// ∫_{|t|>ε} f dt on each side separately, extrapolated to ε → 0 over
    /// the epsilon schedule.
    EpsilonRichardson,
}

/// Treatment of the algebraically decaying tail of ∫ g dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailStrategy {
    /// Integrals over [−T, T] for geometrically growing T, extrapolated in
    /// 1/T to T → ∞.
    InverseCutoffRichardson,
    /// Plain truncation at the cutoff; the error estimate is the change
    /// over the last doubling.
    Truncate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub pv_method: PvMethod,
    /// Strictly decreasing exclusion half-widths for [`PvMethod::EpsilonRichardson`].
    pub pv_epsilon_schedule: Vec<f64>,
    /// Largest |t| reached by exponentially decaying integrands.
    pub tail_cutoff: f64,
    /// Gauss–Legendre nodes per panel.
    pub panel_nodes: usize,
    /// Panel width near the origin.
    pub panel_width: f64,
    /// A panel whose contribution is below this fraction of the running
    /// total ends the march outward.
    pub target_tol: f64,
    pub tail_strategy: TailStrategy,
    /// First cutoff of the algebraic-tail extrapolation.
    pub tail_start: f64,
    /// Number of cutoff doublings for the algebraic-tail extrapolation.
    pub tail_doublings: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            pv_method: PvMethod::Folded,
            pv_epsilon_schedule: vec![0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625],
            tail_cutoff: 400.0,
            panel_nodes: 20,
            panel_width: 1.0,
            target_tol: 1e-16,
            tail_strategy: TailStrategy::InverseCutoffRichardson,
            tail_start: 16.0,
            tail_doublings: 6,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let eps = &self.pv_epsilon_schedule;
        if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Domain("epsilon schedule must hold positive values".into()));
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Domain("epsilon schedule must be strictly decreasing".into()));
        }
        if !(self.tail_cutoff > 1.0 && self.tail_cutoff.is_finite()) {
            return Err(Error::Domain("tail cutoff must exceed 1".into()));
        }
        if self.panel_nodes < 2 || self.panel_nodes > 200 {
            return Err(Error::Domain("panel nodes must lie in 2..=200".into()));
        }
        if !(self.panel_width > 0.0 && self.panel_width <= 4.0) {
            return Err(Error::Domain("panel width must lie in (0, 4]".into()));
        }
        if !(self.target_tol > 0.0 && self.target_tol < 1e-3) {
            return Err(Error::Domain("target tolerance must lie in (0, 1e-3)".into()));
        }
        if !(self.tail_start >= 1.0 && self.tail_start.is_finite()) || self.tail_doublings < 2 {
            return Err(Error::Domain("algebraic tail needs a start >= 1 and at least two doublings".into()));
        }
        Ok(())
    }
}

/// Result of a vector-valued quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub values: Vec<Complex64>,
    /// Estimated absolute error (largest component).
    pub error: f64,
    /// Largest |t| sampled.
    pub reach: f64,
}

fn validate_zeta(zeta: Complex64) -> Result<()> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) || zeta.norm() == 0.0 {
        return Err(Error::Domain(format!("zeta = {zeta} must be finite and nonzero")));
    }
    if zeta.im == 0.0 && zeta.re > 0.0 {
        return Err(Error::Domain(format!("|arg(-zeta)| < pi fails for zeta = {zeta}")));
    }
    Ok(())
}

/// ρ(t; ζ) = Γ(1−it)Γ(it)(−ζ)^{it}/(2πi) = −(−ζ)^{it}/(2 sinh πt), evaluated
/// in a form that neither overflows nor underflows prematurely.
pub fn weight_rho(t: f64, zeta: Complex64) -> Result<Complex64> {
    validate_zeta(zeta)?;
    if t == 0.0 {
        return Err(Error::Pole {
            function: "weight_rho",
            at: Complex64::new(0.0, 0.0),
        });
    }
    Ok(weight_fast(t, zeta.norm().ln(), (-zeta).arg()))
}

#[inline]
fn weight_fast(t: f64, ln_modulus: f64, arg_minus_zeta: f64) -> Complex64 {
    let a = t.abs();
    let magnitude = (-t * arg_minus_zeta - PI * a).exp() / -(-2.0 * PI * a).exp_m1();
    -t.signum() * Complex64::from_polar(magnitude, t * ln_modulus)
}

/// ρ evaluated literally through the Γ functions; overflows for large |t|.
pub fn weight_rho_gamma(t: f64, zeta: Complex64) -> Result<Complex64> {
    use crate::special::{gamma, principal_power};
    validate_zeta(zeta)?;
    if t == 0.0 {
        return Err(Error::Pole {
            function: "weight_rho_gamma",
            at: Complex64::new(0.0, 0.0),
        });
    }
    let it = Complex64::new(0.0, t);
    let v = gamma(1.0 - it)? * gamma(it)? * principal_power(-zeta, it)? / (2.0 * PI * I);
    finite("weight_rho_gamma", v)
}

/// Piecewise exponential form for Im ζ ≠ 0: ζ^{it}/(1 − e^{2πt}) when
/// arg ζ ∈ (−π, 0), ζ^{it}/(e^{−2πt} − 1) when arg ζ ∈ (0, π).
pub fn weight_rho_piecewise(t: f64, zeta: Complex64) -> Result<Complex64> {
    validate_zeta(zeta)?;
    if zeta.im == 0.0 {
        return Err(Error::Domain("piecewise weight form needs Im(zeta) != 0".into()));
    }
    if t == 0.0 {
        return Err(Error::Pole {
            function: "weight_rho_piecewise",
            at: Complex64::new(0.0, 0.0),
        });
    }
    let power = (I * t * zeta.ln()).exp();
    let den = if zeta.im < 0.0 {
        1.0 - (2.0 * PI * t).exp()
    } else {
        (-2.0 * PI * t).exp() - 1.0
    };
    finite("weight_rho_piecewise", power / den)
}

/// Unit-circle form ρ₀(t) = e^{−φt}/(1 − e^{2πt}) with φ = arg ζ ∈ (−π, 0).
pub fn weight_rho0(t: f64, phi: f64) -> Result<f64> {
    if !(phi > -PI && phi < 0.0) {
        return Err(Error::Domain(format!("phi = {phi} outside (-pi, 0)")));
    }
    if t == 0.0 {
        return Err(Error::Pole {
            function: "weight_rho0",
            at: Complex64::new(0.0, 0.0),
        });
    }
    Ok((-phi * t).exp() / (1.0 - (2.0 * PI * t).exp()))
}

/// Principal value of ∫ f over the real line, f having at most a simple
/// pole at t = 0 and decaying exponentially. `f` returns a fixed-length
/// vector of integrand components.
pub fn principal_value<F>(f: F, len: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    cfg.validate()?;
    match cfg.pv_method {
        PvMethod::Folded => pv_folded(&f, len, cfg),
        PvMethod::EpsilonRichardson => pv_epsilon(&f, len, cfg),
    }
}

fn add_into(acc: &mut [Complex64], v: &[Complex64], scale: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * scale;
    }
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integrates `f` over the given panels; the node evaluations run in
/// parallel and are summed in a fixed order.
fn panel_sums<F>(f: &F, len: usize, rule: &GaussLegendre, panels: &[(f64, f64)]) -> Result<Vec<Vec<Complex64>>>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    let points: Vec<(usize, f64, f64)> = panels
        .iter()
        .enumerate()
        .flat_map(|(i, &(a, b))| rule.mapped(a, b).map(move |(x, w)| (i, x, w)))
        .collect();
    let values: Vec<Result<Vec<Complex64>>> = points.par_iter().map(|&(_, x, _)| f(x)).collect();
    let mut sums = vec![vec![Complex64::new(0.0, 0.0); len]; panels.len()];
    for ((i, _, w), v) in points.iter().zip(values) {
        let v = v?;
        if v.len() != len {
            return Err(Error::Dimension("integrand returned the wrong number of components".into()));
        }
        add_into(&mut sums[*i], &v, *w);
    }
    Ok(sums)
}

/// Marches panels outward from `start` in both directions of `folded`
/// until their contributions fall below the target tolerance.
fn march<F>(f: &F, len: usize, cfg: &QuadratureConfig, start: f64, width: f64, rule: &GaussLegendre) -> Result<Integral>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    const BATCH: usize = 8;
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    let mut a = start;
    let mut quiet = 0;
    let mut last = f64::INFINITY;
    while a < cfg.tail_cutoff {
        let panels: Vec<(f64, f64)> = (0..BATCH)
            .map(|j| (a + j as f64 * width, a + (j + 1) as f64 * width))
            .collect();
        let sums = panel_sums(f, len, rule, &panels)?;
        for (panel, s) in panels.iter().zip(&sums) {
            add_into(&mut total, s, 1.0);
            last = max_norm(s);
            if last <= cfg.target_tol * max_norm(&total).max(1.0) {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(Integral {
                        values: total,
                        error: last,
                        reach: panel.1,
                    });
                }
            } else {
                quiet = 0;
            }
        }
        a += BATCH as f64 * width;
    }
    Err(Error::NonConvergence {
        what: "principal-value tail",
        achieved: last,
    })
}

fn pv_folded<F>(f: &F, len: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    let rule = GaussLegendre::new(cfg.panel_nodes)?;
    let folded = |t: f64| -> Result<Vec<Complex64>> {
        let mut v = f(t)?;
        let w = f(-t)?;
        add_into(&mut v, &w, 1.0);
        Ok(v)
    };
    march(&folded, len, cfg, 0.0, cfg.panel_width, &rule)
}

fn pv_epsilon<F>(f: &F, len: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Result<Vec<Complex64>> + Sync,
{
    let rule = GaussLegendre::new(cfg.panel_nodes)?;
    let eps = &cfg.pv_epsilon_schedule;
    // Common outer part, one side at a time.
    let right = march(f, len, cfg, 1.0, cfg.panel_width, &rule)?;
    let left = march(&|t: f64| f(-t), len, cfg, 1.0, cfg.panel_width, &rule)?;
    let mut samples = Vec::with_capacity(eps.len());
    for &e in eps {
        if e >= 1.0 {
            return Err(Error::Domain("epsilon-schedule entries must be below 1".into()));
        }
        // geometric panels from e up to 1
        let mut cuts = vec![e];
        while *cuts.last().unwrap() < 0.5 {
            let next = (cuts.last().unwrap() * 2.0).min(1.0);
            cuts.push(next);
        }
        if *cuts.last().unwrap() < 1.0 {
            cuts.push(1.0);
        }
        let panels: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        let r = panel_sums(f, len, &rule, &panels)?;
        let l = panel_sums(&|t: f64| f(-t), len, &rule, &panels)?;
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        for s in r.iter().chain(&l) {
            add_into(&mut v, s, 1.0);
        }
        add_into(&mut v, &right.values, 1.0);
        add_into(&mut v, &left.values, 1.0);
        samples.push(v);
    }
    let mut values = Vec::with_capacity(len);
    let mut error: f64 = right.error.max(left.error);
    for j in 0..len {
        let column: Vec<Complex64> = samples.iter().map(|s| s[j]).collect();
        let (v, e) = neville_to_zero(eps, &column)?;
        values.push(v);
        error = error.max(e);
    }
    Ok(Integral {
        values,
        error,
        reach: right.reach.max(left.reach),
    })
}

/// I(ζ) = ∫_C ρ dt = PV∫ρ dt − i/2. Its closed form is iζ/(1−ζ).
pub fn weight_norm_integral(zeta: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    validate_zeta(zeta)?;
    let (lnm, arg) = (zeta.norm().ln(), (-zeta).arg());
    let pv = principal_value(|t| Ok(vec![weight_fast(t, lnm, arg)]), 1, cfg)?;
    Ok(pv.values[0] - 0.5 * I)
}

pub fn weight_norm_closed_form(zeta: Complex64) -> Complex64 {
    I * zeta / (1.0 - zeta)
}

/// Partial sum of the residue series for I(ζ): −iΣ_{n=0}^{terms−1} ζ^{−n}
/// for |ζ| > 1 (poles in the lower half plane), iΣ_{n=1}^{terms} ζⁿ for
/// |ζ| < 1.
pub fn residue_partial_sum(zeta: Complex64, terms: usize) -> Result<Complex64> {
    validate_zeta(zeta)?;
    let r = zeta.norm();
    if (r - 1.0).abs() < 1e-12 {
        return Err(Error::Domain("residue series needs |zeta| != 1".into()));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    if r > 1.0 {
        let ratio = zeta.inv();
        let mut term = Complex64::new(1.0, 0.0);
        for _ in 0..terms {
            sum += term;
            term *= ratio;
        }
        Ok(-I * sum)
    } else {
        let mut term = zeta;
        for _ in 0..terms {
            sum += term;
            term *= zeta;
        }
        Ok(I * sum)
    }
}

/// The residue series summed to convergence.
pub fn residue_series(zeta: Complex64) -> Result<Complex64> {
    validate_zeta(zeta)?;
    let r = zeta.norm();
    if (r - 1.0).abs() < 1e-12 {
        return Err(Error::Domain("residue series needs |zeta| != 1".into()));
    }
    let q = if r > 1.0 { 1.0 / r } else { r };
    // q^terms below 1e-18 relative to the first term
    let terms = ((-18.0 * 10f64.ln()) / q.ln()).ceil();
    if terms > 1e6 {
        return Err(Error::NonConvergence {
            what: "residue series",
            achieved: q,
        });
    }
    residue_partial_sum(zeta, terms as usize + 1)
}

/// Gram matrix (i/ζⁿ)((ζ−1)/ζ)[PV∫ρ p_n p_m dt − (i/2)(−1)^{n+m}] of the
/// regular solutions p_0..p_{size−1} on the real τ line.
pub fn gram_matrix_zeta(zeta: Complex64, size: usize, cfg: &QuadratureConfig) -> Result<Vec<Vec<Complex64>>> {
    validate_zeta(zeta)?;
    if size == 0 {
        return Err(Error::Dimension("Gram matrix needs size >= 1".into()));
    }
    let (lnm, arg) = (zeta.norm().ln(), (-zeta).arg());
    let integrand = |t: f64| -> Result<Vec<Complex64>> {
        let rho = weight_fast(t, lnm, arg);
        let p = regular_solution(Complex64::new(t, 0.0), zeta, size - 1)?;
        let mut out = Vec::with_capacity(size * size);
        for n in 0..size {
            for m in 0..size {
                out.push(rho * p[n] * p[m]);
            }
        }
        Ok(out)
    };
    let pv = principal_value(integrand, size * size, cfg)?;
    let pre = (zeta - 1.0) / zeta;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    let mut zpow = Complex64::new(1.0, 0.0);
    for (n, row) in gram.iter_mut().enumerate() {
        for (m, entry) in row.iter_mut().enumerate() {
            let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
            *entry = I / zpow * pre * (pv.values[n * size + m] - 0.5 * I * sign);
        }
        zpow *= zeta;
    }
    Ok(gram)
}

pub fn gram_matrix(p: &PhysicalParams, size: usize, cfg: &QuadratureConfig) -> Result<Vec<Vec<Complex64>>> {
    gram_matrix_zeta(derive_params(p)?.zeta, size, cfg)
}

/// Contour integral of ρ·h along the real line with a semicircular
/// indentation of the given radius below t = 0. `h` must accept complex
/// arguments. Used to check the principal-value reduction.
pub fn indented_contour_integral<H>(zeta: Complex64, h: H, radius: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    H: Fn(Complex64) -> Result<Complex64> + Sync,
{
    validate_zeta(zeta)?;
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain("indentation radius must lie in (0, 1)".into()));
    }
    let log_minus_zeta = (-zeta).ln();
    let rho = |t: Complex64| -(I * t * log_minus_zeta).exp() / (2.0 * (PI * t).sinh());
    let rule = GaussLegendre::new(cfg.panel_nodes)?;
    // the semicircle t = r e^{iθ}, θ from −π to 0
    let mut arc = Complex64::new(0.0, 0.0);
    for (theta, w) in rule.mapped(-PI, 0.0) {
        let t = Complex64::from_polar(radius, theta);
        arc += rho(t) * h(t)? * I * t * w;
    }
    let line = |x: f64| -> Result<Vec<Complex64>> {
        let t = Complex64::new(x, 0.0);
        Ok(vec![rho(t) * h(t)?])
    };
    let right = march(&line, 1, cfg, radius, cfg.panel_width, &rule)?;
    let left = march(&|x: f64| line(-x), 1, cfg, radius, cfg.panel_width, &rule)?;
    Ok(arc + right.values[0] + left.values[0])
}

/// The integral (2ik/π)∫g^ξ_{nm}(t) dt for n, m < size at C = 0, with the
/// estimated error of each entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixIntegral {
    pub values: Vec<Vec<Complex64>>,
    pub errors: Vec<Vec<f64>>,
    /// Cutoffs T used in the tail extrapolation.
    pub cutoffs: Vec<f64>,
}

/// Integrand p_ν q_μ sampled at t for all ν ≤ μ < size.
fn pq_products(t: f64, zeta: Complex64, size: usize) -> Result<Vec<Complex64>> {
    let tau = Complex64::new(t, 0.0);
    let p = regular_upward(tau, zeta, size - 1)?;
    let q = second_solution(tau, zeta, size - 1)?;
    let mut out = Vec::with_capacity(size * size);
    for n in 0..size {
        for m in 0..size {
            out.push(p[n.min(m)] * q[n.max(m)]);
        }
    }
    Ok(out)
}

pub fn appendix_block(p: &PhysicalParams, size: usize, cfg: &QuadratureConfig) -> Result<AppendixIntegral> {
    cfg.validate()?;
    if p.c != 0.0 {
        return Err(Error::Domain("the g-integral relation is implemented for C = 0".into()));
    }
    if size == 0 {
        return Err(Error::Dimension("appendix block needs size >= 1".into()));
    }
    let d = derive_params(p)?;
    let zeta = d.zeta;
    let len = size * size;
    let rule = GaussLegendre::new(cfg.panel_nodes)?;
    let f = |t: f64| pq_products(t, zeta, size);
    let sym = |t: f64| -> Result<Vec<Complex64>> {
        let mut v = f(t)?;
        add_into(&mut v, &f(-t)?, 1.0);
        Ok(v)
    };
    // [−T0, T0] on unit-scale panels, then each [T, 2T] on 16 panels.
    let t0 = cfg.tail_start;
    let base_panels: Vec<(f64, f64)> = {
        let count = (t0 / cfg.panel_width).ceil() as usize;
        let w = t0 / count as f64;
        (0..count).map(|j| (j as f64 * w, (j + 1) as f64 * w)).collect()
    };
    let mut running = vec![Complex64::new(0.0, 0.0); len];
    for s in panel_sums(&sym, len, &rule, &base_panels)? {
        add_into(&mut running, &s, 1.0);
    }
    let mut cutoffs = vec![t0];
    let mut samples = vec![running.clone()];
    let mut lo = t0;
    for _ in 0..cfg.tail_doublings {
        let hi = 2.0 * lo;
        let w = (hi - lo) / 16.0;
        let panels: Vec<(f64, f64)> = (0..16).map(|j| (lo + j as f64 * w, lo + (j + 1) as f64 * w)).collect();
        for s in panel_sums(&sym, len, &rule, &panels)? {
            add_into(&mut running, &s, 1.0);
        }
        cutoffs.push(hi);
        samples.push(running.clone());
        lo = hi;
    }
    let pre = -(zeta - 1.0) / (PI * zeta);
    let mut values = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    let mut errors = vec![vec![0.0; size]; size];
    let h: Vec<f64> = cutoffs.iter().map(|t| 1.0 / t).collect();
    for n in 0..size {
        for m in 0..size {
            let column: Vec<Complex64> = samples.iter().map(|s| s[n * size + m]).collect();
            let (v, e) = match cfg.tail_strategy {
                TailStrategy::InverseCutoffRichardson => neville_to_zero(&h, &column)?,
                TailStrategy::Truncate => {
                    let k = column.len();
                    (column[k - 1], (column[k - 1] - column[k - 2]).norm())
                }
            };
            let scale = pre / zeta.powi(m as i32);
            values[n][m] = scale * v;
            errors[n][m] = scale.norm() * e;
        }
    }
    Ok(AppendixIntegral {
        values,
        errors,
        cutoffs,
    })
}

/// Single entry of [`appendix_block`] with its error estimate.
pub fn appendix_orthogonality(p: &PhysicalParams, n: usize, m: usize, cfg: &QuadratureConfig) -> Result<(Complex64, f64)> {
    let block = appendix_block(p, n.max(m) + 1, cfg)?;
    Ok((block.values[n][m], block.errors[n][m]))
}
