//! Two-dimensional Green's matrix of h_ξ⊗I + I⊗h_η + 2kt₀ I⊗I
//! (+ C(Q⊗I + I⊗Q)) as a contour convolution of one-dimensional blocks:
//!
//! G_{n₁n₂,m₁m₂} = (i/ζ^{m₁})((ζ−1)/ζ) θ^{n₁−m₁}
//!     [PV∫dτ ρ(τ; ζ) p_{n₁}(τ) p_{m₁}(τ) g^η_{n₂m₂}(τ − t₀/root)
//!      − (i/2)(−1)^{n₁+m₁} g^η_{n₂m₂}(−t₀/root)],
//!
//! where g^η is evaluated directly at its own spectral value. At C = 0,
//! τ = t, θ = 1 and root = 1.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens1d::block_at;
use crate::operators::{build_h, derive_params, DerivedParams, PhysicalParams};
use crate::recurrence::regular_solution;
use crate::weight::{appendix_block, gram_matrix_zeta, principal_value, weight_rho, QuadratureConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest supported block order per index.
pub const MAX_ORDER_2D: usize = 6;

/// Choice of the free factors (A_ξ, x_n, A_η, y_n, B, D) in the
/// convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParameterSet {
    /// A_ξ = 0, x_n = 2πiρ₀ (2kρ with the matching B_m when C ≠ 0),
    /// A_η = k/(iπ), y_n = 0, B = D = 1.
    Principal,
    /// A_ξ = 1 with the remaining factors as in [`ParameterSet::Principal`].
    Alternative,
}

impl ParameterSet {
    pub fn description(&self) -> &'static str {
        match self {
            ParameterSet::Principal => "A_xi=0, x_n=2*pi*i*rho, A_eta=k/(i*pi), y_n=0, B=D=1",
            ParameterSet::Alternative => "A_xi=1, x_n=2*pi*i*rho, A_eta=k/(i*pi), y_n=0, B=D=1",
        }
    }
}

/// Knobs of the convolution, including the probes used as controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionOptions {
    /// Keep the −(i/2)(−1)^{n₁+m₁} g^η half-residue term. Dropping it gives
    /// a block that must fail the inverse identity.
    pub pole_term: bool,
    /// Shift q → q + y p inside the η factor.
    pub eta_gauge: Complex64,
    /// Replace g^η by 1, which must reduce the block to the Gram identity.
    pub unit_eta: bool,
}

impl Default for ConvolutionOptions {
    fn default() -> Self {
        Self {
            pole_term: true,
            eta_gauge: Complex64::new(0.0, 0.0),
            unit_eta: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreensBlock2D {
    pub params: PhysicalParams,
    pub order: usize,
    /// Row-major over ((n₁, n₂), (m₁, m₂)).
    pub elements: Vec<Complex64>,
    pub quadrature: QuadratureConfig,
    pub parameter_set: ParameterSet,
    pub options: ConvolutionOptions,
    /// Estimated absolute quadrature error.
    pub quadrature_error: f64,
    /// Largest |τ| sampled by the quadrature.
    pub reach: f64,
}

impl GreensBlock2D {
    pub fn index(order: usize, n1: usize, n2: usize, m1: usize, m2: usize) -> usize {
        ((n1 * order + n2) * order + m1) * order + m2
    }

    pub fn get(&self, n1: usize, n2: usize, m1: usize, m2: usize) -> Complex64 {
        self.elements[Self::index(self.order, n1, n2, m1, m2)]
    }

    /// Row (n₁, n₂) flattened, as used by the exported matrix.
    pub fn rows(&self) -> usize {
        self.order * self.order
    }
}

/// B_m = θ^{−(2m+1)} ((ζ−1)/(χ−1)) (χ/ζ)^{m+1}, the diagonal factor that
/// makes x_n = 2kρ an admissible choice when A_ξ = 0.
pub fn b_coefficient(d: &DerivedParams, m: usize) -> Complex64 {
    let m = m as i32;
    d.theta.powi(-(2 * m + 1)) * (d.zeta - 1.0) / (d.chi - 1.0) * (d.chi / d.zeta).powi(m + 1)
}

/// Outer prefactor of G built through the ξ factor g̃^ξ with x_n = 2kρ:
/// 2k·(i/2k)((χ−1)/χ) θ^{n+m+1} χ^{−m} B_m.
fn general_prefactor(d: &DerivedParams, n: usize, m: usize) -> Complex64 {
    I * (d.chi - 1.0) / d.chi * d.theta.powi((n + m + 1) as i32) * d.chi.powi(-(m as i32)) * b_coefficient(d, m)
}

/// The same prefactor written directly: (i/ζ^m)((ζ−1)/ζ) θ^{n−m}.
pub fn direct_prefactor(d: &DerivedParams, n: usize, m: usize) -> Complex64 {
    I * d.zeta.powi(-(m as i32)) * (d.zeta - 1.0) / d.zeta * d.theta.powi(n as i32 - m as i32)
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER_2D {
        return Err(Error::Dimension(format!("2D block order must lie in 1..={MAX_ORDER_2D}")));
    }
    Ok(())
}

fn convolve_with(
    p: &PhysicalParams,
    order: usize,
    cfg: &QuadratureConfig,
    options: &ConvolutionOptions,
    prefactor: impl Fn(&DerivedParams, usize, usize) -> Complex64,
) -> Result<GreensBlock2D> {
    check_order(order)?;
    cfg.validate()?;
    let d = derive_params(p)?;
    let eta = derive_params(&p.mirrored())?;
    let shift = p.t / d.root;
    let n = order;
    let len = n * n * n * n;
    let eta_block = |tau: f64| -> Result<Vec<Vec<Complex64>>> {
        if options.unit_eta {
            Ok(vec![vec![Complex64::new(1.0, 0.0); n]; n])
        } else {
            block_at(&eta, Complex64::new(tau, 0.0), n, options.eta_gauge)
        }
    };
    let integrand = |tau: f64| -> Result<Vec<Complex64>> {
        let rho = weight_rho(tau, d.zeta)?;
        let pv = regular_solution(Complex64::new(tau, 0.0), d.zeta, n - 1)?;
        let g = eta_block(tau - shift)?;
        let mut out = Vec::with_capacity(len);
        for n1 in 0..n {
            for n2 in 0..n {
                for m1 in 0..n {
                    let w = rho * pv[n1] * pv[m1];
                    for m2 in 0..n {
                        out.push(w * g[n2][m2]);
                    }
                }
            }
        }
        Ok(out)
    };
    let pv = principal_value(integrand, len, cfg)?;
    let pole = eta_block(-shift)?;
    let mut elements = vec![Complex64::new(0.0, 0.0); len];
    for n1 in 0..n {
        for m1 in 0..n {
            let pre = prefactor(&d, n1, m1);
            let sign = if (n1 + m1) % 2 == 0 { 1.0 } else { -1.0 };
            for n2 in 0..n {
                for m2 in 0..n {
                    let idx = GreensBlock2D::index(n, n1, n2, m1, m2);
                    let mut v = pv.values[idx];
                    if options.pole_term {
                        v -= 0.5 * I * sign * pole[n2][m2];
                    }
                    elements[idx] = pre * v;
                }
            }
        }
    }
    let scale = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| prefactor(&d, a, b).norm())
        .fold(0.0, f64::max);
    Ok(GreensBlock2D {
        params: *p,
        order,
        elements,
        quadrature: cfg.clone(),
        parameter_set: ParameterSet::Principal,
        options: options.clone(),
        quadrature_error: pv.error * scale,
        reach: pv.reach,
    })
}

/// C = 0 convolution with the weight ρ₀.
pub fn convolve_c0(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig) -> Result<GreensBlock2D> {
    convolve_c0_with(p, order, cfg, &ConvolutionOptions::default())
}

pub fn convolve_c0_with(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig, options: &ConvolutionOptions) -> Result<GreensBlock2D> {
    if p.c != 0.0 {
        return Err(Error::Domain("convolve_c0 requires C = 0".into()));
    }
    convolve_with(p, order, cfg, options, |d, _n, m| I * d.zeta.powi(-(m as i32)) * (d.zeta - 1.0) / d.zeta)
}

/// Convolution along the τ contour, valid for any C in the real-root
/// regime (including C = 0).
pub fn convolve_general(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig) -> Result<GreensBlock2D> {
    convolve_general_with(p, order, cfg, &ConvolutionOptions::default())
}

pub fn convolve_general_with(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig, options: &ConvolutionOptions) -> Result<GreensBlock2D> {
    convolve_with(p, order, cfg, options, general_prefactor)
}

/// Dispatches on C.
pub fn convolve(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig, options: &ConvolutionOptions) -> Result<GreensBlock2D> {
    if p.c == 0.0 {
        convolve_c0_with(p, order, cfg, options)
    } else {
        convolve_general_with(p, order, cfg, options)
    }
}

/// Largest |(h G − I⊗I)_{(n₁n₂),(m₁m₂)}| over rows 0 ≤ n₁, n₂ ≤ N−2 and all
/// columns, with h assembled from both tridiagonal factors and the single
/// shared constant 2kt₀.
pub fn residual_identity_2d(block: &GreensBlock2D, p: &PhysicalParams) -> Result<f64> {
    let n = block.order;
    if n < 3 {
        return Err(Error::Dimension("2D residual needs a block of order >= 3".into()));
    }
    if block.elements.len() != n * n * n * n {
        return Err(Error::Dimension("2D block has the wrong number of elements".into()));
    }
    let hx = build_h(&p.with_t(0.0), n)?;
    let he = build_h(&p.mirrored().with_t(0.0), n)?;
    let shift = Complex64::new(2.0 * p.k * p.t, 0.0);
    let g = |n1: usize, n2: usize, m1: usize, m2: usize| block.get(n1, n2, m1, m2);
    let rows: Vec<(usize, usize)> = (0..n - 1).flat_map(|a| (0..n - 1).map(move |b| (a, b))).collect();
    let worst = rows
        .par_iter()
        .map(|&(n1, n2)| {
            let mut w: f64 = 0.0;
            for m1 in 0..n {
                for m2 in 0..n {
                    let mut r = (hx.b(n1) + he.b(n2) + shift) * g(n1, n2, m1, m2)
                        + hx.d(n1 + 1) * g(n1 + 1, n2, m1, m2)
                        + he.d(n2 + 1) * g(n1, n2 + 1, m1, m2);
                    if n1 > 0 {
                        r += hx.a(n1) * g(n1 - 1, n2, m1, m2);
                    }
                    if n2 > 0 {
                        r += he.a(n2) * g(n1, n2 - 1, m1, m2);
                    }
                    if n1 == m1 && n2 == m2 {
                        r -= 1.0;
                    }
                    w = w.max(r.norm());
                }
            }
            w
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// conj(G_{(n₂n₁),(m₂m₁)}): the block obtained by exchanging the roles of
/// the two coordinates. At C = 0 it inverts the same operator.
pub fn exchanged_block(block: &GreensBlock2D) -> GreensBlock2D {
    let n = block.order;
    let mut elements = vec![Complex64::new(0.0, 0.0); block.elements.len()];
    for n1 in 0..n {
        for n2 in 0..n {
            for m1 in 0..n {
                for m2 in 0..n {
                    elements[GreensBlock2D::index(n, n1, n2, m1, m2)] = block.get(n2, n1, m2, m1).conj();
                }
            }
        }
    }
    GreensBlock2D {
        elements,
        ..block.clone()
    }
}

/// Numerical values of the separation conditions at C = 0.
///
/// U_{nm} = A_η D ∫_C g̃^ξ_{nm} dt and V_{nm} = A_ξ B ∫_C g̃^η_{nm} dt must be
/// proportional to δ_{nm} with U + V = 1 on the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub principal_u: Vec<Vec<Complex64>>,
    pub principal_v: Vec<Vec<Complex64>>,
    pub alternative_u: Vec<Vec<Complex64>>,
    pub alternative_v: Vec<Vec<Complex64>>,
    /// max |U − δ| for the principal set (diagonal and off-diagonal).
    pub principal_deviation: f64,
    /// max over n of |U_nn + V_nn − 1| for the alternative set.
    pub alternative_sum_deviation: f64,
    /// Largest off-diagonal |U| or |V| for the alternative set.
    pub alternative_leakage: f64,
    /// Error estimate carried over from the ∫g dt extrapolation.
    pub alternative_error_estimate: f64,
}

pub fn verify_separation_conditions(p: &PhysicalParams, order: usize, cfg: &QuadratureConfig) -> Result<SeparationReport> {
    if p.c != 0.0 {
        return Err(Error::Domain("separation conditions are checked for C = 0".into()));
    }
    let d = derive_params(p)?;
    let zeta = d.zeta;
    // (i/ζⁿ)((ζ−1)/ζ)∫_C ρ p_n p_m; U uses ζ^{−m} in place of ζ^{−n}.
    let gram = gram_matrix_zeta(zeta, order, cfg)?;
    let zero = Complex64::new(0.0, 0.0);
    let principal_u: Vec<Vec<Complex64>> = (0..order)
        .map(|n| {
            (0..order)
                .map(|m| gram[n][m] * zeta.powi(n as i32 - m as i32))
                .collect()
        })
        .collect();
    let principal_v = vec![vec![zero; order]; order];
    // A = (2ik/π)∫g^ξ dt; (k/iπ)∫g^ξ = −A/2 and (k/iπ)∫g^η = conj(A)/2.
    let appendix = appendix_block(p, order, cfg)?;
    let a = &appendix.values;
    let alternative_u: Vec<Vec<Complex64>> = (0..order)
        .map(|n| (0..order).map(|m| principal_u[n][m] - a[n][m] / 2.0).collect())
        .collect();
    let alternative_v: Vec<Vec<Complex64>> = (0..order)
        .map(|n| (0..order).map(|m| a[n][m].conj() / 2.0).collect())
        .collect();
    let mut principal_deviation: f64 = 0.0;
    let mut alternative_sum_deviation: f64 = 0.0;
    let mut alternative_leakage: f64 = 0.0;
    let mut alternative_error_estimate: f64 = 0.0;
    for n in 0..order {
        for m in 0..order {
            let delta = if n == m { 1.0 } else { 0.0 };
            principal_deviation = principal_deviation.max((principal_u[n][m] - delta).norm());
            if n == m {
                let s = alternative_u[n][n] + alternative_v[n][n] - 1.0;
                alternative_sum_deviation = alternative_sum_deviation.max(s.norm());
            } else {
                alternative_leakage = alternative_leakage
                    .max(alternative_u[n][m].norm())
                    .max(alternative_v[n][m].norm());
            }
            alternative_error_estimate = alternative_error_estimate.max(appendix.errors[n][m]);
        }
    }
    Ok(SeparationReport {
        principal_u,
        principal_v,
        alternative_u,
        alternative_v,
        principal_deviation,
        alternative_sum_deviation,
        alternative_leakage,
        alternative_error_estimate,
    })
}
