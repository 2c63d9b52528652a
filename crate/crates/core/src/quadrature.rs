//! Gauss rules, adaptive Gauss–Kronrod integration, and sequence
//! extrapolation (Neville–Richardson, Wynn ε).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("Gauss-Legendre rule needs at least one node".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Laguerre rule for ∫₀^∞ e^{−x} f(x) dx.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Domain("Gauss-Laguerre rule needs at least one node".into()));
    }
    let nf = n as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut z: f64 = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut pp = 0.0;
        let mut p_prev = 0.0;
        for _ in 0..200 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            p_prev = p2;
            pp = nf * (p1 - p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        nodes.push(z);
        weights.push(-1.0 / (pp * nf * p_prev));
    }
    Ok((nodes, weights))
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value, error estimate, and ∫|f| on [a, b] from the 15-point Kronrod rule.
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let center = f(mid);
    let mut kronrod = center * GK_WEIGHTS[7];
    let mut gauss = center * G7_WEIGHTS[3];
    let mut magnitude = center.norm() * GK_WEIGHTS[7];
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let (lo, hi) = (f(mid - dx), f(mid + dx));
        kronrod += (lo + hi) * GK_WEIGHTS[j];
        magnitude += (lo.norm() + hi.norm()) * GK_WEIGHTS[j];
        if j % 2 == 1 {
            gauss += (lo + hi) * G7_WEIGHTS[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm(), magnitude * half.abs())
}

/// Adaptive 15-point Gauss–Kronrod integration of a complex integrand.
/// Returns the value and the accumulated error estimate. A subinterval is
/// also accepted once its error estimate is at the rounding level of ∫|f|.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(Complex64, f64)> {
    let mut pending = vec![(a, b, gk15(&mut f, a, b))];
    let mut done = Complex64::new(0.0, 0.0);
    let mut done_err = 0.0;
    let mut evaluations = 0usize;
    while let Some((lo, hi, (value, err, magnitude))) = pending.pop() {
        let total = done + value + pending.iter().map(|p| p.2 .0).sum::<Complex64>();
        let budget = abs_tol.max(rel_tol * total.norm()) * (hi - lo) / (b - a);
        let too_small = (hi - lo) <= 1e-13 * (b - a).abs().max(1.0);
        let at_rounding = err <= 50.0 * f64::EPSILON * magnitude;
        if err <= budget || too_small || at_rounding {
            done += value;
            done_err += err;
            continue;
        }
        evaluations += 1;
        if evaluations > 20_000 {
            return Err(Error::NonConvergence {
                what: "adaptive Gauss-Kronrod",
                achieved: err,
            });
        }
        let mid = 0.5 * (lo + hi);
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        pending.push((lo, mid, left));
        pending.push((mid, hi, right));
    }
    if !(done.re.is_finite() && done.im.is_finite()) {
        return Err(Error::NonFinite("adaptive Gauss-Kronrod"));
    }
    Ok((done, done_err))
}

/// Polynomial extrapolation of y(h) to h = 0 through all samples (Neville's
/// tableau). Returns the estimate and the difference between the two
/// highest-order estimates as an error indicator.
pub fn neville_to_zero(h: &[f64], y: &[Complex64]) -> Result<(Complex64, f64)> {
    if h.len() != y.len() || h.is_empty() {
        return Err(Error::Dimension("extrapolation needs matching, nonempty samples".into()));
    }
    let mut table = y.to_vec();
    let mut previous_top = table[table.len() - 1];
    let mut top = previous_top;
    for level in 1..h.len() {
        for i in (level..h.len()).rev() {
            let (hi, hj) = (h[i], h[i - level]);
            table[i] = (table[i] * hj - table[i - 1] * hi) / (hj - hi);
        }
        previous_top = top;
        top = table[h.len() - 1];
    }
    Ok((top, (top - previous_top).norm()))
}

/// Wynn's ε-algorithm applied to a sequence of partial sums. Returns the
/// deepest finite even-column estimate (the last term when the sequence is
/// too short or has already converged exactly). Repeated consecutive sums,
/// which come from exactly vanishing terms, are dropped first.
pub fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let Some(&last) = sums.last() else {
        return Complex64::new(0.0, 0.0);
    };
    let mut best = last;
    let mut cur: Vec<Complex64> = sums.to_vec();
    cur.dedup();
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); cur.len() + 1];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() == 0.0 {
                return best;
            }
            next.push(prev[i + 1] + diff.inv());
        }
        column += 1;
        if column % 2 == 0 {
            match next.last() {
                Some(v) if v.re.is_finite() && v.im.is_finite() => best = *v,
                _ => return best,
            }
        }
        prev = cur;
        cur = next;
    }
    best
}
