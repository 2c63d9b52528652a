//! One-dimensional Green's matrices: the inverse of h + 2kt (+ C·Q),
//! assembled from the regular and second solutions.
//!
//! g_{nm} = (i/2k)((χ−1)/χ) θ^{n+m+1} χ^{−m} p_ν(τ; ζ) q_μ(τ; ζ),
//! ν = min(n, m), μ = max(n, m). The η operator is the ξ operator with
//! k → −k and t → −t.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{build_h, derive_params, DerivedParams, PhysicalParams, TridiagonalOperator};
use crate::recurrence::{regular_solution, second_solution};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Xi,
    Eta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreensBlock1D {
    pub params: PhysicalParams,
    pub variant: Variant,
    pub order: usize,
    /// `elements[n][m]`, 0 ≤ n, m < order.
    pub elements: Vec<Vec<Complex64>>,
    /// Constant y of the shift q → q + y p applied to the second solution.
    pub gauge: Complex64,
}

impl GreensBlock1D {
    pub fn gauge_description(&self) -> String {
        if self.gauge == Complex64::new(0.0, 0.0) {
            "y=0".to_string()
        } else {
            format!("y={}{:+}i", self.gauge.re, self.gauge.im)
        }
    }

    /// Parameters of the operator this block inverts.
    pub fn operator_params(&self) -> PhysicalParams {
        match self.variant {
            Variant::Xi => self.params,
            Variant::Eta => self.params.mirrored(),
        }
    }

    /// The tridiagonal operator this block inverts, materialized far enough
    /// for [`inverse_residual`].
    pub fn operator(&self) -> Result<TridiagonalOperator> {
        build_h(&self.operator_params(), self.order.max(1))
    }
}

/// Prefactor (i/2k)((χ−1)/χ) θ^{n+m+1} χ^{−m} for all n, m < size.
fn prefactors(d: &DerivedParams, size: usize) -> Vec<Vec<Complex64>> {
    let base = I / (2.0 * d.k) * (d.chi - 1.0) / d.chi;
    let theta: Vec<Complex64> = (0..=2 * size).map(|j| d.theta.powi(j as i32)).collect();
    let chi_inv: Vec<Complex64> = (0..size).map(|m| d.chi.powi(-(m as i32))).collect();
    (0..size)
        .map(|n| (0..size).map(|m| base * theta[n + m + 1] * chi_inv[m]).collect())
        .collect()
}

/// Green's matrix elements for the operator with derived parameters `d`
/// at the spectral value τ, with the second solution shifted by y·p.
pub fn block_at(d: &DerivedParams, tau: Complex64, size: usize, y: Complex64) -> Result<Vec<Vec<Complex64>>> {
    if size == 0 {
        return Err(Error::Dimension("block order must be at least 1".into()));
    }
    let p = regular_solution(tau, d.zeta, size - 1)?;
    let mut q = second_solution(tau, d.zeta, size - 1)?;
    if y != Complex64::new(0.0, 0.0) {
        for (qn, pn) in q.iter_mut().zip(&p) {
            *qn += y * pn;
        }
    }
    let pre = prefactors(d, size);
    Ok((0..size)
        .map(|n| {
            (0..size)
                .map(|m| pre[n][m] * p[n.min(m)] * q[n.max(m)])
                .collect()
        })
        .collect())
}

/// ξ-side block at the parameter point's t.
pub fn g_xi_block(p: &PhysicalParams, order: usize) -> Result<GreensBlock1D> {
    let d = derive_params(p)?;
    Ok(GreensBlock1D {
        params: *p,
        variant: Variant::Xi,
        order,
        elements: block_at(&d, d.tau_of(p.t), order, Complex64::new(0.0, 0.0))?,
        gauge: Complex64::new(0.0, 0.0),
    })
}

/// η-side block by the substitution k → −k, t → −t in the ξ formula.
pub fn g_eta_by_substitution(p: &PhysicalParams, order: usize) -> Result<GreensBlock1D> {
    let m = p.mirrored();
    let d = derive_params(&m)?;
    Ok(GreensBlock1D {
        params: *p,
        variant: Variant::Eta,
        order,
        elements: block_at(&d, d.tau_of(m.t), order, Complex64::new(0.0, 0.0))?,
        gauge: Complex64::new(0.0, 0.0),
    })
}

/// η-side block. At C = 0 this is the elementwise conjugate of the ξ block;
/// otherwise the substitution k → −k, t → −t is used.
pub fn g_eta_block(p: &PhysicalParams, order: usize) -> Result<GreensBlock1D> {
    if p.c != 0.0 {
        return g_eta_by_substitution(p, order);
    }
    let xi = g_xi_block(p, order)?;
    Ok(GreensBlock1D {
        variant: Variant::Eta,
        elements: xi
            .elements
            .iter()
            .map(|row| row.iter().map(|z| z.conj()).collect())
            .collect(),
        ..xi
    })
}

pub fn g_block(p: &PhysicalParams, order: usize, variant: Variant) -> Result<GreensBlock1D> {
    match variant {
        Variant::Xi => g_xi_block(p, order),
        Variant::Eta => g_eta_block(p, order),
    }
}

/// Adds y·(prefactor)·p_ν p_μ to every element, the effect of q → q + y p.
pub fn gauge_shift(block: &GreensBlock1D, y: Complex64) -> Result<GreensBlock1D> {
    if y == Complex64::new(0.0, 0.0) {
        return Ok(block.clone());
    }
    let op = block.operator_params();
    let d = derive_params(&op)?;
    let size = block.order;
    let p = regular_solution(d.tau_of(op.t), d.zeta, size.max(1) - 1)?;
    let pre = prefactors(&d, size);
    let elements = (0..size)
        .map(|n| {
            (0..size)
                .map(|m| block.elements[n][m] + pre[n][m] * y * p[n] * p[m])
                .collect()
        })
        .collect();
    Ok(GreensBlock1D {
        elements,
        gauge: block.gauge + y,
        ..block.clone()
    })
}

/// Largest |a_n g_{n−1,m} + b_n g_{nm} + d_{n+1} g_{n+1,m} − δ_{nm}| over
/// rows 0 ≤ n ≤ N−2 (every row whose neighbours lie inside the block) and
/// all columns.
pub fn inverse_residual(block: &GreensBlock1D, h: &TridiagonalOperator) -> Result<f64> {
    let n_rows = block.order;
    if n_rows < 3 {
        return Err(Error::Dimension("inverse residual needs a block of order >= 3".into()));
    }
    if h.order + 1 < n_rows {
        return Err(Error::Dimension(format!(
            "operator of order {} is too small for a block of order {n_rows}",
            h.order
        )));
    }
    let g = &block.elements;
    let worst = (0..n_rows - 1)
        .into_par_iter()
        .map(|n| {
            let mut row_worst: f64 = 0.0;
            for m in 0..n_rows {
                let mut r = h.b(n) * g[n][m] + h.d(n + 1) * g[n + 1][m];
                if n > 0 {
                    r += h.a(n) * g[n - 1][m];
                }
                if n == m {
                    r -= 1.0;
                }
                row_worst = row_worst.max(r.norm());
            }
            row_worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coulomb_corner_element() {
        // (i/2)((ζ−1)/ζ) q_0(0.7; −i) with q_0 from mpmath
        let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
        let g = g_xi_block(&p, 3).unwrap();
        let zeta = cx(0.0, -1.0);
        let q0 = cx(0.116_721_517_418_459_73, -0.596_815_097_560_783);
        let expect = I / 2.0 * (zeta - 1.0) / zeta * q0;
        assert!((g.elements[0][0] - expect).norm() < 1e-13);
    }

    #[test]
    fn general_element() {
        // C = 1 point: (i/4)((χ−1)/χ) θ⁴ χ^{−1} p_1 q_2 with mpmath p_1, q_2
        let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
        let d = derive_params(&p).unwrap();
        let g = g_xi_block(&p, 4).unwrap();
        let p1 = cx(-1.900_806_382_293_221_2, 0.458_764_110_189_607_7);
        let q2 = cx(-0.053_570_593_156_770_915, 0.092_812_045_121_822_755);
        let expect = I / 4.0 * (d.chi - 1.0) / d.chi * d.theta.powi(4) / d.chi * p1 * q2;
        assert!((g.elements[2][1] - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn residual_and_gauge() {
        let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
        let g = g_xi_block(&p, 20).unwrap();
        let h = g.operator().unwrap();
        assert!(inverse_residual(&g, &h).unwrap() < 1e-10);
        let shifted = gauge_shift(&g, cx(3.7, 0.0)).unwrap();
        assert!(inverse_residual(&shifted, &h).unwrap() < 1e-10);
        assert_eq!(shifted.gauge_description(), "y=3.7+0i");
        let zeta = cx(0.0, -1.0);
        let pv = regular_solution(cx(0.7, 0.0), zeta, 19).unwrap();
        for n in 0..20 {
            for m in 0..20 {
                let diff = shifted.elements[n][m] - g.elements[n][m];
                let expect = I / 2.0 * (zeta - 1.0) / zeta / zeta.powi(m as i32) * 3.7 * pv[n] * pv[m];
                assert!((diff - expect).norm() < 1e-12 * expect.norm().max(1.0));
            }
        }
    }

    #[test]
    fn construction_symmetry() {
        let p = PhysicalParams::new(1.0, 1.0, 0.3, 0.0).unwrap();
        let g = g_xi_block(&p, 11).unwrap();
        let zeta = cx(0.0, -1.0);
        for n in 0..11 {
            for m in 0..11 {
                let a = g.elements[n][m] * zeta.powi(m as i32);
                let b = g.elements[m][n] * zeta.powi(n as i32);
                assert!((a - b).norm() < 1e-14 * a.norm().max(1e-300));
            }
        }
    }
}
