//! Acceptance criteria 1-10. Runs as a plain binary so that every PASS/FAIL
//! line is printed; the process exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};
use std::time::{Duration, Instant};

use sturmian_core::greens1d::{g_block, g_eta_block, g_eta_by_substitution, g_xi_block, gauge_shift, inverse_residual, Variant};
use sturmian_core::greens2d::{convolve_c0, convolve_c0_with, convolve_general, residual_identity_2d, ConvolutionOptions};
use sturmian_core::recurrence::{expansion_check, regular_closed_form, regular_upward};
use sturmian_core::weight::{
    appendix_block, gram_matrix, gram_matrix_zeta, residue_series, weight_norm_closed_form, weight_norm_integral, QuadratureConfig,
};
use sturmian_core::{derive_params, s_c_sequences, wronskian, Complex64, PhysicalParams, Result};

struct Outcome {
    passed: bool,
    summary: String,
}

fn sweep() -> Vec<PhysicalParams> {
    let mut out = Vec::new();
    for b in [0.5, 1.0, 2.0] {
        for k in [0.5, 1.0, 3.0] {
            for t in [-1.0, 0.0, 0.7] {
                for cf in [0.0, 0.3, -0.3] {
                    out.push(PhysicalParams::new(b, k, t, cf * k * k).unwrap());
                }
            }
        }
    }
    out
}

fn max_abs_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn identity_deviation(a: &[Vec<Complex64>]) -> f64 {
    let mut w: f64 = 0.0;
    for (n, row) in a.iter().enumerate() {
        for (m, v) in row.iter().enumerate() {
            let d = if n == m { 1.0 } else { 0.0 };
            w = w.max((v - d).norm());
        }
    }
    w
}

fn criterion_1() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in sweep() {
        let d = derive_params(&p)?;
        let tau = d.tau_of(p.t);
        let rec = regular_upward(tau, d.zeta, 50)?;
        for (n, pn) in rec.iter().enumerate() {
            let closed = regular_closed_form(n, tau, d.zeta)?;
            worst = worst.max((pn - closed).norm() / closed.norm());
        }
    }
    Ok(Outcome {
        passed: worst < 1e-9,
        summary: format!("max relative |p_n recurrence - closed form| = {worst:.2e} (n <= 50, 81 points)"),
    })
}

fn criterion_2() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in sweep() {
        let pair = s_c_sequences(&p, 100)?;
        let expect = derive_params(&p)?.wronskian_constant();
        for n in 1..=100 {
            worst = worst.max((wronskian(&pair, n)? - expect).norm() / expect.norm());
        }
    }
    Ok(Outcome {
        passed: worst < 1e-9,
        summary: format!("max |W(n) - (b - C/2b - ik)| / |b - C/2b - ik| = {worst:.2e} (n <= 100)"),
    })
}

fn criterion_3() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in sweep() {
        for v in [Variant::Xi, Variant::Eta] {
            let g = g_block(&p, 40, v)?;
            worst = worst.max(inverse_residual(&g, &g.operator()?)?);
        }
    }
    let base = PhysicalParams::new(1.0, 1.0, 0.7, 0.0)?;
    let shifted = gauge_shift(&g_xi_block(&base, 40)?, Complex64::new(3.7, 0.0))?;
    let gauged = inverse_residual(&shifted, &shifted.operator()?)?;
    worst = worst.max(gauged);
    Ok(Outcome {
        passed: worst < 1e-9,
        summary: format!("max 1D inverse residual = {worst:.2e} (N = 40, both variants; gauge y = 3.7: {gauged:.2e})"),
    })
}

fn criterion_4() -> Result<Outcome> {
    let mut conj: f64 = 0.0;
    let mut sub: f64 = 0.0;
    for p in sweep().into_iter().filter(|p| p.c == 0.0) {
        let xi = g_xi_block(&p, 20)?;
        let eta = g_eta_block(&p, 20)?;
        let xi_conj: Vec<Vec<Complex64>> = xi.elements.iter().map(|r| r.iter().map(|z| z.conj()).collect()).collect();
        conj = conj.max(max_abs_diff(&eta.elements, &xi_conj));
        sub = sub.max(max_abs_diff(&g_eta_by_substitution(&p, 20)?.elements, &xi_conj));
    }
    Ok(Outcome {
        passed: conj < 1e-12 && sub < 1e-10,
        summary: format!("|g^eta - conj g^xi| = {conj:.2e}, substitution path = {sub:.2e}"),
    })
}

fn criterion_5() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let on_circle = [
        derive_params(&PhysicalParams::new(1.0, 1.0, 0.0, 0.0)?)?.zeta,
        derive_params(&PhysicalParams::new(1.0, 2.0, 0.0, 1.0)?)?.zeta,
    ];
    let off_circle = [Complex64::from_polar(2.0, FRAC_PI_3), Complex64::from_polar(0.5, -FRAC_PI_4)];
    let mut quad: f64 = 0.0;
    let mut residue: f64 = 0.0;
    for z in on_circle.iter().chain(&off_circle) {
        quad = quad.max((weight_norm_integral(*z, &cfg)? - weight_norm_closed_form(*z)).norm());
    }
    for z in off_circle {
        residue = residue.max((weight_norm_integral(z, &cfg)? - residue_series(z)?).norm());
    }
    Ok(Outcome {
        passed: quad < 1e-6 && residue < 1e-8,
        summary: format!("|I(zeta) - i zeta/(1-zeta)| = {quad:.2e} at 4 points, residue series {residue:.2e}"),
    })
}

fn criterion_6() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for (b, k) in [(1.0, 1.0), (0.5, 1.0), (2.0, 3.0)] {
        worst = worst.max(identity_deviation(&gram_matrix(&PhysicalParams::new(b, k, 0.0, 0.0)?, 8, &cfg)?));
    }
    worst = worst.max(identity_deviation(&gram_matrix(&PhysicalParams::new(1.0, 2.0, 0.0, 1.0)?, 8, &cfg)?));
    let off = identity_deviation(&gram_matrix_zeta(Complex64::from_polar(2.0, FRAC_PI_3), 8, &cfg)?);
    worst = worst.max(off);
    Ok(Outcome {
        passed: worst < 1e-6,
        summary: format!("max |Gram - I| = {worst:.2e} (N = 8; three C = 0 points, C = 1, |zeta| = 2: {off:.2e})"),
    })
}

fn criterion_7() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0)?;
    let a = appendix_block(&p, 5, &cfg)?;
    let dev = identity_deviation(&a.values);
    let est = a.errors.iter().flatten().fold(0.0f64, |w, &e| w.max(e));
    Ok(Outcome {
        passed: dev < 1e-3,
        summary: format!("max |(2ik/pi) int g_nm dt - delta_nm| = {dev:.2e} (n, m <= 4), error estimate {est:.2e}"),
    })
}

fn criterion_8() -> Result<Outcome> {
    let cfg = QuadratureConfig::default();
    let p0 = PhysicalParams::new(1.0, 1.0, 0.7, 0.0)?;
    let r0 = residual_identity_2d(&convolve_c0(&p0, 5, &cfg)?, &p0)?;
    let p1 = PhysicalParams::new(1.0, 2.0, 0.5, 1.0)?;
    let r1 = residual_identity_2d(&convolve_general(&p1, 4, &cfg)?, &p1)?;
    let ablated = ConvolutionOptions {
        pole_term: false,
        ..Default::default()
    };
    let ra = residual_identity_2d(&convolve_c0_with(&p0, 5, &cfg, &ablated)?, &p0)?;
    Ok(Outcome {
        passed: r0 < 1e-5 && r1 < 1e-4 && ra >= 1e-2,
        summary: format!("2D residual C = 0 N = 5: {r0:.2e}; C = 1 N = 4: {r1:.2e}; ablated control {ra:.2e}"),
    })
}

fn criterion_9() -> Result<Outcome> {
    let base = PhysicalParams::new(1.0, 1.0, 0.7, 0.0)?;
    let d1 = max_abs_diff(&g_xi_block(&base, 20)?.elements, &g_xi_block(&base.with_c(1e-8), 20)?.elements);
    let cfg = QuadratureConfig::default();
    let a = convolve_c0(&base, 4, &cfg)?;
    let b = convolve_general(&base.with_c(1e-6), 4, &cfg)?;
    let d2 = a.elements.iter().zip(&b.elements).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    Ok(Outcome {
        passed: d1 < 1e-6 && d2 < 1e-4,
        summary: format!("1D |g(C=1e-8) - g(0)| = {d1:.2e}; 2D |G(C=1e-6) - G_c0| = {d2:.2e}"),
    })
}

fn criterion_10() -> Result<Outcome> {
    let grid: Vec<f64> = (0..=40).map(|j| j as f64 * 0.25).collect();
    let mut worst: f64 = 0.0;
    for p in [PhysicalParams::new(1.0, 1.0, 0.7, 0.0)?, PhysicalParams::new(1.0, 2.0, 0.5, 1.0)?] {
        worst = worst.max(expansion_check(&p, 60, &grid)?);
    }
    Ok(Outcome {
        passed: worst < 1e-6,
        summary: format!("max |expansion - 1F1 solution| on [0, 10] = {worst:.2e} (60 terms, Wynn-resummed partial sums)"),
    })
}

fn main() {
    let criteria: [(u32, fn() -> Result<Outcome>, Duration); 10] = [
        (1, criterion_1, Duration::from_secs(5)),
        (2, criterion_2, Duration::from_secs(1)),
        (3, criterion_3, Duration::from_secs(30)),
        (4, criterion_4, Duration::MAX),
        (5, criterion_5, Duration::from_secs(10)),
        (6, criterion_6, Duration::from_secs(60)),
        (7, criterion_7, Duration::from_secs(120)),
        (8, criterion_8, Duration::from_secs(600)),
        (9, criterion_9, Duration::MAX),
        (10, criterion_10, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (id, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, text) = match result {
            Ok(o) => {
                let in_time = elapsed <= budget;
                let note = if in_time { String::new() } else { format!(" [over budget {budget:?}]") };
                (o.passed && in_time, format!("{}{note}", o.summary))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {id:>2}: {} ({:.3} s) {text}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
