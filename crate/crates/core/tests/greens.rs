use proptest::prelude::*;
use sturmian_core::greens1d::{g_block, g_xi_block, inverse_residual, Variant};
use sturmian_core::greens2d::{
    b_coefficient, convolve, convolve_c0, convolve_general, direct_prefactor, exchanged_block, residual_identity_2d, verify_separation_conditions,
    ConvolutionOptions, GreensBlock2D,
};
use sturmian_core::weight::QuadratureConfig;
use sturmian_core::{derive_params, Complex64, Error, PhysicalParams};

#[test]
fn coulomb_2d_block_inverts_operator() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let cfg = QuadratureConfig::default();
    let g = convolve_c0(&p, 4, &cfg).unwrap();
    assert!(residual_identity_2d(&g, &p).unwrap() < 1e-10);
    assert!(residual_identity_2d(&exchanged_block(&g), &p).unwrap() < 1e-10);
    assert_eq!(g.elements.len(), 256);
    assert!(g.quadrature_error < 1e-12);
}

#[test]
fn general_2d_block_inverts_operator() {
    let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let g = convolve_general(&p, 3, &QuadratureConfig::default()).unwrap();
    assert!(residual_identity_2d(&g, &p).unwrap() < 1e-10);
}

#[test]
fn pole_term_is_required() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let options = ConvolutionOptions {
        pole_term: false,
        ..Default::default()
    };
    let g = convolve(&p, 3, &QuadratureConfig::default(), &options).unwrap();
    assert!(residual_identity_2d(&g, &p).unwrap() > 1e-2);
}

#[test]
fn eta_gauge_does_not_matter() {
    let p = PhysicalParams::new(0.8, 1.3, -0.4, 0.0).unwrap();
    let cfg = QuadratureConfig::default();
    let options = ConvolutionOptions {
        eta_gauge: Complex64::new(3.7, 0.0),
        ..Default::default()
    };
    let g = convolve(&p, 3, &cfg, &options).unwrap();
    assert!(residual_identity_2d(&g, &p).unwrap() < 1e-7);
}

#[test]
fn flattening_is_row_major() {
    assert_eq!(GreensBlock2D::index(3, 0, 0, 0, 1), 1);
    assert_eq!(GreensBlock2D::index(3, 0, 0, 1, 0), 3);
    assert_eq!(GreensBlock2D::index(3, 0, 1, 0, 0), 9);
    assert_eq!(GreensBlock2D::index(3, 1, 0, 0, 0), 27);
}

#[test]
fn b_coefficient_reduces_at_zero_c() {
    let d = derive_params(&PhysicalParams::new(1.3, 0.9, 0.0, 0.0).unwrap()).unwrap();
    for m in 0..5 {
        let expect = (d.zeta - 1.0) / (d.chi - 1.0) * (d.chi / d.zeta).powi(m as i32 + 1);
        assert!((b_coefficient(&d, m) - expect).norm() < 1e-14);
        assert!((b_coefficient(&d, m) - 1.0).norm() < 1e-14);
    }
    let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let d = derive_params(&p).unwrap();
    assert!((direct_prefactor(&d, 2, 1) - Complex64::i() / d.zeta * (d.zeta - 1.0) / d.zeta * d.theta).norm() < 1e-14);
}

#[test]
fn separation_conditions_hold() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let r = verify_separation_conditions(&p, 3, &QuadratureConfig::default()).unwrap();
    assert!(r.principal_deviation < 1e-10);
    assert!(r.alternative_sum_deviation < 1e-6);
    assert!(r.alternative_leakage < 1e-6);
    for n in 0..3 {
        assert!((r.alternative_u[n][n] - 0.5).norm() < 1e-6);
        assert!((r.alternative_v[n][n] - 0.5).norm() < 1e-6);
    }
    assert!(matches!(verify_separation_conditions(&p.with_c(0.2), 3, &QuadratureConfig::default()), Err(Error::Domain(_))));
}

#[test]
fn block_orders_are_checked() {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let g = g_xi_block(&p, 2).unwrap();
    assert!(matches!(inverse_residual(&g, &g.operator().unwrap()), Err(Error::Dimension(_))));
    assert!(matches!(g_xi_block(&p, 0), Err(Error::Dimension(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_dimensional_inverse(b in 0.3f64..3.0, k in 0.3f64..3.0, t in -2.0f64..2.0, frac in -0.45f64..0.45, eta in any::<bool>()) {
        let p = PhysicalParams::new(b, k, t, frac * k * k).unwrap();
        let variant = if eta { Variant::Eta } else { Variant::Xi };
        let g = g_block(&p, 16, variant).unwrap();
        prop_assert!(inverse_residual(&g, &g.operator().unwrap()).unwrap() < 1e-9);
    }
}
