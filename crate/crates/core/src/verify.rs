//! Numerical verification suites. Each check evaluates one identity at the
//! requested parameter point and reports its residual against a tolerance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens1d::{g_eta_block, g_eta_by_substitution, g_xi_block, gauge_shift, inverse_residual};
use crate::greens2d::{convolve, exchanged_block, residual_identity_2d, verify_separation_conditions, ConvolutionOptions};
use crate::operators::{derive_params, PhysicalParams};
use crate::recurrence::{regular_closed_form, regular_upward, s_c_sequences, second_solution, wronskian};
use crate::weight::{appendix_block, gram_matrix, gram_matrix_zeta, residue_series, weight_norm_closed_form, weight_norm_integral, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Recurrence,
    Wronskian,
    Inverse1d,
    Gram,
    NormIntegral,
    Appendix,
    Inverse2d,
    Separation,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Recurrence,
        Suite::Wronskian,
        Suite::Inverse1d,
        Suite::Gram,
        Suite::NormIntegral,
        Suite::Appendix,
        Suite::Inverse2d,
        Suite::Separation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::Wronskian => "wronskian",
            Suite::Inverse1d => "inverse-1d",
            Suite::Gram => "gram",
            Suite::NormIntegral => "norm-integral",
            Suite::Appendix => "appendix",
            Suite::Inverse2d => "inverse-2d",
            Suite::Separation => "separation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity being tested, in words.
    pub identity: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, identity: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            identity: identity.into(),
            residual,
            tolerance,
            passed: residual < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: PhysicalParams,
    pub library_version: String,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub params: PhysicalParams,
    /// Block order; each suite has its own default when unset.
    pub order: Option<usize>,
    pub quadrature: QuadratureConfig,
    /// Gauge constant for the gauge-shift checks (3.7 when zero).
    pub gauge_y: f64,
    /// Drop the half-residue term of the 2D convolution.
    pub ablate_pole_term: bool,
}

impl VerifyOptions {
    pub fn new(params: PhysicalParams) -> Self {
        Self {
            params,
            order: None,
            quadrature: QuadratureConfig::default(),
            gauge_y: 0.0,
            ablate_pole_term: false,
        }
    }

    fn gauge(&self) -> Complex64 {
        Complex64::new(if self.gauge_y == 0.0 { 3.7 } else { self.gauge_y }, 0.0)
    }
}

fn max_dev(a: &[Vec<Complex64>], b: impl Fn(usize, usize) -> Complex64) -> f64 {
    let mut w: f64 = 0.0;
    for (n, row) in a.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            w = w.max((v - b(n, m)).norm());
        }
    }
    w
}

fn delta(n: usize, m: usize) -> Complex64 {
    Complex64::new(if n == m { 1.0 } else { 0.0 }, 0.0)
}

fn recurrence_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let d = derive_params(&o.params)?;
    let tau = d.tau_of(o.params.t);
    let top = o.order.unwrap_or(50);
    let p = regular_upward(tau, d.zeta, top)?;
    let mut worst: f64 = 0.0;
    for (n, pn) in p.iter().enumerate() {
        let closed = regular_closed_form(n, tau, d.zeta)?;
        worst = worst.max((pn - closed).norm() / closed.norm().max(f64::MIN_POSITIVE));
    }
    let q = second_solution(tau, d.zeta, top)?;
    let mut q_worst: f64 = 0.0;
    for n in 1..top {
        let nf = n as f64;
        let diag = 1.0 + (1.0 + d.zeta) * nf - Complex64::i() * (1.0 - d.zeta) * tau;
        let terms = [d.zeta * nf * q[n - 1], diag * q[n], (nf + 1.0) * q[n + 1]];
        let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
        q_worst = q_worst.max(terms.iter().sum::<Complex64>().norm() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(vec![
        Check::new(
            "regular-closed-form",
            "upward recurrence for p_n equals the terminating hypergeometric closed form (relative)",
            worst,
            1e-9,
        ),
        Check::new(
            "second-recurrence",
            "q_n satisfies the three-term recurrence (relative to the largest term)",
            q_worst,
            1e-12,
        ),
    ])
}

fn wronskian_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let top = o.order.unwrap_or(100).max(2);
    let pair = s_c_sequences(&o.params, top)?;
    let d = derive_params(&o.params)?;
    let expect = d.wronskian_constant();
    let mut worst: f64 = 0.0;
    for n in 1..=top {
        worst = worst.max((wronskian(&pair, n)? - expect).norm());
    }
    Ok(vec![Check::new(
        "wronskian-constant",
        "alpha_n (c_n s_{n-1} - c_{n-1} s_n) equals b - C/2b - ik for every n (absolute |dW|)",
        worst,
        1e-9 * expect.norm(),
    )])
}

fn inverse_1d_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let n = o.order.unwrap_or(40).max(3);
    let xi = g_xi_block(&o.params, n)?;
    let eta = g_eta_block(&o.params, n)?;
    let shifted = gauge_shift(&xi, o.gauge())?;
    let mut checks = vec![
        Check::new(
            "xi-inverse",
            "rows 0..N-2 of h_xi g^xi equal the identity",
            inverse_residual(&xi, &xi.operator()?)?,
            1e-9,
        ),
        Check::new(
            "eta-inverse",
            "rows 0..N-2 of h_eta g^eta equal the identity",
            inverse_residual(&eta, &eta.operator()?)?,
            1e-9,
        ),
        Check::new(
            "gauge-shifted-inverse",
            "q -> q + y p leaves the inverse identity intact",
            inverse_residual(&shifted, &shifted.operator()?)?,
            1e-9,
        ),
    ];
    if o.params.c == 0.0 {
        let sub = g_eta_by_substitution(&o.params, n)?;
        checks.push(Check::new(
            "eta-substitution",
            "the xi formula with k -> -k, t -> -t reproduces g^eta",
            max_dev(&eta.elements, |a, b| sub.elements[a][b]),
            1e-10,
        ));
        checks.push(Check::new(
            "conjugation",
            "at C = 0, g^eta is the complex conjugate of g^xi",
            max_dev(&eta.elements, |a, b| xi.elements[a][b].conj()),
            1e-12,
        ));
    }
    Ok(checks)
}

fn gram_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let n = o.order.unwrap_or(8);
    let gram = gram_matrix(&o.params, n, &o.quadrature)?;
    Ok(vec![Check::new(
        "gram-identity",
        "the regular solutions are orthonormal under the indented-contour weight",
        max_dev(&gram, delta),
        1e-6,
    )])
}

fn norm_integral_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let zeta = derive_params(&o.params)?.zeta;
    let at_point = (weight_norm_integral(zeta, &o.quadrature)? - weight_norm_closed_form(zeta)).norm();
    let mut off_circle: f64 = 0.0;
    let mut residues: f64 = 0.0;
    for z in [
        Complex64::from_polar(2.0, std::f64::consts::FRAC_PI_3),
        Complex64::from_polar(0.5, -std::f64::consts::FRAC_PI_4),
    ] {
        let quad = weight_norm_integral(z, &o.quadrature)?;
        off_circle = off_circle.max((quad - weight_norm_closed_form(z)).norm());
        residues = residues.max((quad - residue_series(z)?).norm());
    }
    Ok(vec![
        Check::new(
            "norm-integral",
            "principal value minus half residue of the weight equals i zeta/(1 - zeta)",
            at_point,
            1e-6,
        ),
        Check::new(
            "norm-integral-off-circle",
            "the same identity at |zeta| = 2 and |zeta| = 1/2",
            off_circle,
            1e-6,
        ),
        Check::new(
            "residue-series",
            "the quadrature matches the sum over enclosed poles of the weight",
            residues,
            1e-8,
        ),
    ])
}

fn appendix_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let n = o.order.unwrap_or(5);
    let p = o.params.with_c(0.0);
    let a = appendix_block(&p, n, &o.quadrature)?;
    let worst_err = a.errors.iter().flatten().fold(0.0f64, |w, &e| w.max(e));
    Ok(vec![
        Check::new(
            "g-integral",
            "(2ik/pi) times the integral of g^xi_nm over t equals delta_nm (evaluated at C = 0)",
            max_dev(&a.values, delta),
            1e-3,
        ),
        Check::new(
            "g-integral-error-estimate",
            "achieved error estimate of the tail extrapolation",
            worst_err,
            1e-3,
        ),
    ])
}

fn inverse_2d_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let p = &o.params;
    let default_order = if p.c == 0.0 { 5 } else { 4 };
    let n = o.order.unwrap_or(default_order);
    let tol = if p.c == 0.0 { 1e-5 } else { 1e-4 };
    if o.ablate_pole_term {
        let options = ConvolutionOptions {
            pole_term: false,
            ..Default::default()
        };
        let g = convolve(p, n, &o.quadrature, &options)?;
        let r = residual_identity_2d(&g, p)?;
        // expected to fail: without the half-residue term G is not an inverse
        return Ok(vec![Check::new(
            "inverse-2d-ablated",
            "rows of (h_xi + h_eta + 2kt0) G equal the identity when G omits its half-residue term",
            r,
            tol,
        )]);
    }
    let g = convolve(p, n, &o.quadrature, &ConvolutionOptions::default())?;
    let mut checks = vec![Check::new(
        "inverse-2d",
        "rows (n1,n2) in [0,N-2]^2 of (h_xi + h_eta + 2kt0) G equal the identity",
        residual_identity_2d(&g, p)?,
        tol,
    )];
    let gauged = convolve(
        p,
        n,
        &o.quadrature,
        &ConvolutionOptions {
            eta_gauge: o.gauge(),
            ..Default::default()
        },
    )?;
    checks.push(Check::new(
        "inverse-2d-eta-gauge",
        "a gauge shift of the eta factor leaves the 2D identity intact",
        residual_identity_2d(&gauged, p)?,
        tol,
    ));
    if p.c == 0.0 {
        checks.push(Check::new(
            "inverse-2d-exchange",
            "conj(G_(n2n1),(m2m1)) also inverts the operator at C = 0",
            residual_identity_2d(&exchanged_block(&g), p)?,
            tol,
        ));
    }
    let unit = convolve(
        p,
        n,
        &o.quadrature,
        &ConvolutionOptions {
            unit_eta: true,
            ..Default::default()
        },
    )?;
    let zeta = derive_params(p)?.zeta;
    let gram = gram_matrix_zeta(zeta, n, &o.quadrature)?;
    let d = derive_params(p)?;
    let mut worst: f64 = 0.0;
    for n1 in 0..n {
        for m1 in 0..n {
            // the unit-eta block carries θ^{n1−m1} ζ^{n1−m1} relative to the Gram entry
            let expect = gram[n1][m1] * (d.theta * d.zeta).powi(n1 as i32 - m1 as i32);
            for n2 in 0..n {
                for m2 in 0..n {
                    worst = worst.max((unit.get(n1, n2, m1, m2) - expect).norm());
                }
            }
        }
    }
    checks.push(Check::new(
        "unit-eta-reduction",
        "with g^eta replaced by 1 the convolution reduces to the Gram matrix",
        worst,
        1e-6,
    ));
    Ok(checks)
}

fn separation_suite(o: &VerifyOptions) -> Result<Vec<Check>> {
    let n = o.order.unwrap_or(5);
    let r = verify_separation_conditions(&o.params.with_c(0.0), n, &o.quadrature)?;
    Ok(vec![
        Check::new(
            "separation-principal",
            "A_xi = 0: U = delta and V = 0 (evaluated at C = 0)",
            r.principal_deviation,
            1e-6,
        ),
        Check::new(
            "separation-alternative-sum",
            "A_xi = 1: U + V = 1 on the diagonal",
            r.alternative_sum_deviation,
            1e-3,
        ),
        Check::new(
            "separation-alternative-diagonal",
            "A_xi = 1: U and V vanish off the diagonal",
            r.alternative_leakage,
            1e-3,
        ),
    ])
}

pub fn run_suite(suite: Suite, o: &VerifyOptions) -> Result<SuiteReport> {
    o.params.validate()?;
    o.quadrature.validate()?;
    let start = std::time::Instant::now();
    let checks = match suite {
        Suite::Recurrence => recurrence_suite(o)?,
        Suite::Wronskian => wronskian_suite(o)?,
        Suite::Inverse1d => inverse_1d_suite(o)?,
        Suite::Gram => gram_suite(o)?,
        Suite::NormIntegral => norm_integral_suite(o)?,
        Suite::Appendix => appendix_suite(o)?,
        Suite::Inverse2d => inverse_2d_suite(o)?,
        Suite::Separation => separation_suite(o)?,
    };
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn verify(suites: &[Suite], o: &VerifyOptions) -> Result<VerificationReport> {
    let reports = suites.iter().map(|&s| run_suite(s, o)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        params: o.params,
        library_version: env!("CARGO_PKG_VERSION").into(),
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}
