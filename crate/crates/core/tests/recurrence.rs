use proptest::prelude::*;
use sturmian_core::quadrature::gauss_laguerre;
use sturmian_core::recurrence::{expansion_check, regular_solution, second_solution};
use sturmian_core::{build_h, build_q_matrix, derive_params, p_sequence, q_sequence, s_c_sequences, symmetrize, wronskian, Complex64, PhysicalParams};

fn laguerre(n_max: usize, x: f64) -> Vec<f64> {
    let mut l = vec![1.0, 1.0 - x];
    for n in 1..n_max {
        let nf = n as f64;
        l.push(((2.0 * nf + 1.0 - x) * l[n] - nf * l[n - 1]) / (nf + 1.0));
    }
    l.truncate(n_max + 1);
    l
}

#[test]
fn coordinate_matrix_matches_quadrature() {
    let b = 0.8;
    let q = build_q_matrix(b, 11).unwrap();
    let (x, w) = gauss_laguerre(30).unwrap();
    let tables: Vec<Vec<f64>> = x.iter().map(|&x| laguerre(10, x)).collect();
    for n in 0..=10 {
        for m in 0..=10 {
            let integral: f64 = x.iter().zip(&w).zip(&tables).map(|((x, w), l)| w * x * l[n] * l[m]).sum::<f64>() / (2.0 * b);
            let entry = match (n as i64 - m as i64).abs() {
                0 => q.b(n),
                1 => q.d(n.max(m)),
                _ => Complex64::new(0.0, 0.0),
            };
            assert!((entry.re - integral).abs() < 1e-10, "Q[{n}][{m}] = {entry} vs {integral}");
            assert_eq!(entry.im, 0.0);
        }
    }
}

#[test]
fn symmetrized_general_operator() {
    let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let d = derive_params(&p).unwrap();
    let h = build_h(&p, 50).unwrap();
    let s = symmetrize(&h, &d).unwrap();
    assert!(s.is_symmetric(0.0));
    for n in 1..=50 {
        let lower = h.a(n) / d.chi.powi(n as i32);
        let upper = h.d(n) / d.chi.powi(n as i32 - 1);
        assert!((lower - upper).norm() < 1e-12 * upper.norm());
        assert!((s.d(n) - upper).norm() < 1e-12 * upper.norm());
    }
}

#[test]
fn operator_is_continuous_in_c() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let h0 = build_h(&p, 30).unwrap();
    let h1 = build_h(&p.with_c(1e-8), 30).unwrap();
    for n in 0..=30 {
        assert!((h0.b(n) - h1.b(n)).norm() < 1e-8 * (n as f64 + 1.0));
    }
    for n in 1..=30 {
        assert!((h0.d(n) - h1.d(n)).norm() < 1e-8 * n as f64);
    }
}

#[test]
fn gauge_shift_preserves_recurrence() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let d = derive_params(&p).unwrap();
    let tau = d.tau_of(p.t);
    let pv = p_sequence(&p, 40).unwrap();
    let qv = q_sequence(&p, 40).unwrap();
    let w: Vec<Complex64> = qv.iter().zip(&pv).map(|(q, p)| q + 3.7 * p).collect();
    for n in 1..40 {
        let nf = n as f64;
        let bn = 1.0 + (1.0 + d.zeta) * nf - Complex64::i() * (1.0 - d.zeta) * tau;
        let terms = [d.zeta * nf * w[n - 1], bn * w[n], (nf + 1.0) * w[n + 1]];
        let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(terms.iter().sum::<Complex64>().norm() < 1e-12 * scale);
    }
}

#[test]
fn regular_solution_is_polynomial_in_t() {
    let zeta = Complex64::new(0.6, -0.8);
    let n = 7;
    let nodes: Vec<f64> = (0..=n).map(|j| -1.5 + 3.0 * j as f64 / n as f64).collect();
    let values: Vec<Complex64> = nodes
        .iter()
        .map(|&t| regular_solution(Complex64::new(t, 0.0), zeta, n).unwrap()[n])
        .collect();
    let held_out = 0.37;
    let mut interp = Complex64::new(0.0, 0.0);
    for (j, &tj) in nodes.iter().enumerate() {
        let basis: f64 = nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &ti)| (held_out - ti) / (tj - ti))
            .product();
        interp += values[j] * basis;
    }
    let direct = regular_solution(Complex64::new(held_out, 0.0), zeta, n).unwrap()[n];
    assert!((interp - direct).norm() < 1e-8 * direct.norm());
}

#[test]
fn second_solution_is_not_polynomial() {
    let zeta = Complex64::new(0.0, -1.0);
    let q: Vec<Complex64> = [0.0, 0.5, 1.0, 1.5]
        .iter()
        .map(|&t| second_solution(Complex64::new(t, 0.0), zeta, 0).unwrap()[0])
        .collect();
    // a cubic through four points has vanishing third difference only if q_0 is one
    let third = q[3] - 3.0 * q[2] + 3.0 * q[1] - q[0];
    assert!(third.norm() > 1e-3);
}

#[test]
fn expansion_of_constant_solution() {
    // t = 0: the reference solution is 1, whose coefficients √(2/b)(−1)ⁿ all contribute
    let p = PhysicalParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let grid: Vec<f64> = (0..=20).map(|j| j as f64 * 0.25).collect();
    assert!(expansion_check(&p, 30, &grid).unwrap() < 1e-10);
}

#[test]
fn expansion_improves_with_terms() {
    let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let grid: Vec<f64> = (0..=40).map(|j| j as f64 * 0.25).collect();
    let errors: Vec<f64> = [20, 40, 60].iter().map(|&n| expansion_check(&p, n, &grid).unwrap()).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_is_constant(b in 0.3f64..3.0, k in 0.3f64..3.0, t in -2.0f64..2.0, frac in -0.45f64..0.45) {
        let p = PhysicalParams::new(b, k, t, frac * k * k).unwrap();
        let pair = s_c_sequences(&p, 30).unwrap();
        let expect = derive_params(&p).unwrap().wronskian_constant();
        for n in 1..=30 {
            let w = wronskian(&pair, n).unwrap();
            prop_assert!((w - expect).norm() < 1e-10 * expect.norm(), "n = {} W = {} expected {}", n, w, expect);
        }
    }

    #[test]
    fn zeta_lies_on_unit_circle(b in 0.1f64..5.0, k in 0.1f64..5.0, frac in -2.0f64..0.49) {
        let d = derive_params(&PhysicalParams::new(b, k, 0.0, frac * k * k).unwrap()).unwrap();
        prop_assert!((d.zeta.norm() - 1.0).abs() < 1e-14);
        prop_assert!((d.chi.norm() - 1.0).abs() < 1e-14);
        let m = d.mirrored();
        prop_assert!((m.zeta * d.zeta - 1.0).norm() < 1e-14);
        prop_assert!((m.theta * d.theta - 1.0).norm() < 1e-14);
    }
}
