//! Physical parameters, derived complex constants, and the tridiagonal
//! operator matrices in the Laguerre (Sturmian) basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Basis scale `b`, momentum `k`, Sommerfeld-type parameter `t` (read as
/// t₀ by the two-dimensional routines) and linear-potential strength `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub b: f64,
    pub k: f64,
    pub t: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl PhysicalParams {
    pub fn new(b: f64, k: f64, t: f64, c: f64) -> Result<Self> {
        let p = Self { b, k, t, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("b", self.b), ("k", self.k), ("t", self.t), ("C", self.c)] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} = {v} is not finite")));
            }
        }
        if self.b <= 0.0 {
            return Err(Error::Domain(format!("b must be positive, got {}", self.b)));
        }
        if self.k == 0.0 {
            return Err(Error::Domain("k must be nonzero".into()));
        }
        let disc = self.discriminant();
        if disc <= 0.0 {
            return Err(Error::Domain(format!(
                "1 - 2C/k^2 = {disc} is not positive; the complex-root regime is not supported"
            )));
        }
        Ok(())
    }

    /// 1 − 2C/k².
    pub fn discriminant(&self) -> f64 {
        1.0 - 2.0 * self.c / (self.k * self.k)
    }

    pub fn with_t(self, t: f64) -> Self {
        Self { t, ..self }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    /// The η-side counterpart: k → −k, t → −t (kt unchanged).
    pub fn mirrored(self) -> Self {
        Self {
            k: -self.k,
            t: -self.t,
            ..self
        }
    }
}

/// Complex constants that depend on (b, k, C) but not on t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub b: f64,
    pub k: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// √(1 − 2C/k²).
    pub root: f64,
    pub zeta: Complex64,
    pub lambda: Complex64,
    pub gamma: Complex64,
    pub theta: Complex64,
    pub chi: Complex64,
}

impl DerivedParams {
    /// τ(t) = (2t + i(1 − root)) / (2 root).
    pub fn tau_of(&self, t: f64) -> Complex64 {
        Complex64::new(2.0 * t, 1.0 - self.root) / (2.0 * self.root)
    }

    /// Inverse of [`tau_of`](Self::tau_of), continued to complex τ.
    pub fn t_of(&self, tau: Complex64) -> Complex64 {
        tau * self.root - Complex64::new(0.0, 0.5 * (1.0 - self.root))
    }

    /// Parameters of the η operator (k → −k): ζ → 1/ζ, χ → 1/χ, θ → 1/θ.
    pub fn mirrored(&self) -> Self {
        derive_raw(self.b, -self.k, self.c)
    }

    /// Constant of the second-solution initial condition and of the
    /// Wronskian: b − C/2b − ik.
    pub fn wronskian_constant(&self) -> Complex64 {
        Complex64::new(self.b - self.c / (2.0 * self.b), -self.k)
    }
}

fn derive_raw(b: f64, k: f64, c: f64) -> DerivedParams {
    let i = Complex64::i();
    let root = (1.0 - 2.0 * c / (k * k)).sqrt();
    let lambda = i * k * (root - 1.0) / 2.0;
    let theta = (b + lambda) / (b - lambda);
    let plus = b + c / (2.0 * b);
    let minus = b - c / (2.0 * b);
    let zeta = Complex64::new(plus, -k * root) / Complex64::new(plus, k * root);
    let chi = Complex64::new(minus, -k) / Complex64::new(minus, k);
    DerivedParams {
        b,
        k,
        c,
        root,
        zeta,
        lambda,
        gamma: Complex64::new(k * root, 0.0),
        theta,
        chi,
    }
}

pub fn derive_params(p: &PhysicalParams) -> Result<DerivedParams> {
    p.validate()?;
    Ok(derive_raw(p.b, p.k, p.c))
}

/// Finite section of an infinite tridiagonal matrix. Row n reads
/// a_n w_{n−1} + b_n w_n + d_{n+1} w_{n+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    pub order: usize,
    /// a_1..a_N
    pub sub: Vec<Complex64>,
    /// b_0..b_N
    pub diag: Vec<Complex64>,
    /// d_1..d_N
    pub sup: Vec<Complex64>,
}

impl TridiagonalOperator {
    /// a_n for 1 ≤ n ≤ N, zero for n = 0.
    pub fn a(&self, n: usize) -> Complex64 {
        if n == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.sub[n - 1]
        }
    }

    pub fn b(&self, n: usize) -> Complex64 {
        self.diag[n]
    }

    /// d_n for 1 ≤ n ≤ N.
    pub fn d(&self, n: usize) -> Complex64 {
        self.sup[n - 1]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.sub
            .iter()
            .zip(&self.sup)
            .all(|(a, d)| (a - d).norm() <= tol * a.norm().max(d.norm()).max(1.0))
    }
}

fn tridiagonal(order: usize, a: impl Fn(f64) -> Complex64, b: impl Fn(f64) -> Complex64, d: impl Fn(f64) -> Complex64) -> TridiagonalOperator {
    TridiagonalOperator {
        order,
        sub: (1..=order).map(|n| a(n as f64)).collect(),
        diag: (0..=order).map(|n| b(n as f64)).collect(),
        sup: (1..=order).map(|n| d(n as f64)).collect(),
    }
}

/// Matrix of h + 2kt (+ C·Q when C ≠ 0) up to index `order`.
pub fn build_h(p: &PhysicalParams, order: usize) -> Result<TridiagonalOperator> {
    p.validate()?;
    if order == 0 {
        return Err(Error::Dimension("operator order must be at least 1".into()));
    }
    let (b, k, t) = (p.b, p.k, p.t);
    let plus = b + p.c / (2.0 * b);
    let minus = b - p.c / (2.0 * b);
    Ok(tridiagonal(
        order,
        |n| Complex64::new(minus, -k) * n,
        |n| Complex64::new(plus + 2.0 * plus * n + 2.0 * k * t, k),
        |n| Complex64::new(minus, k) * n,
    ))
}

/// Matrix of the coordinate ξ in the basis: symmetric, (2n+1)/2b on the
/// diagonal and −(n+1)/2b between n and n+1.
pub fn build_q_matrix(b: f64, order: usize) -> Result<TridiagonalOperator> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!("b must be positive, got {b}")));
    }
    if order == 0 {
        return Err(Error::Dimension("operator order must be at least 1".into()));
    }
    let off = |n: f64| Complex64::new(-n / (2.0 * b), 0.0);
    Ok(tridiagonal(order, off, |n| Complex64::new((2.0 * n + 1.0) / (2.0 * b), 0.0), off))
}

/// Row scaling by χ^{−n}: β_n = b_n/χⁿ, α_n = d_n/χ^{n−1}. At C = 0, χ = ζ.
pub fn symmetrize(h: &TridiagonalOperator, d: &DerivedParams) -> Result<TridiagonalOperator> {
    let base = d.chi;
    if base.norm() == 0.0 {
        return Err(Error::Domain("symmetrization base is zero".into()));
    }
    let inv = base.inv();
    let mut scale = Complex64::new(1.0, 0.0);
    let mut diag = Vec::with_capacity(h.diag.len());
    let mut off = Vec::with_capacity(h.sup.len());
    for n in 0..=h.order {
        diag.push(h.diag[n] * scale);
        if n >= 1 {
            // scale is χ^{−n}; α_n = d_n χ^{−(n−1)}
            off.push(h.sup[n - 1] * scale * base);
        }
        scale *= inv;
    }
    Ok(TridiagonalOperator {
        order: h.order,
        sub: off.clone(),
        diag,
        sup: off,
    })
}
