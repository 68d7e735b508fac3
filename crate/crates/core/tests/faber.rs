use num_complex::Complex64;
use padefaber::faber::{faber_coefficients_in_precision, faber_polynomial_by_quadrature, FaberPolynomial};
use padefaber::{
    estimate_rho0, evaluate_faber_series, faber_basis, faber_coefficients, fit_rate, Error, FnFunction,
    Geometry, Precision,
};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kinds() -> Vec<Geometry> {
    vec![
        Geometry::unit_disk(),
        Geometry::unit_segment(),
        Geometry::ellipse(c(0.0, 0.0), 0.0, 1.0, 2.0).unwrap(),
    ]
}

/// `max_{j,n ≤ n_max} |[Φ_j]_n − δ_{jn}|` and the worst ratio of that error to `ρ^j`.
fn biorthogonality(g: &Geometry, n_max: usize, precision: Precision) -> (f64, f64) {
    let mut worst = 0.0f64;
    let mut worst_scaled = 0.0f64;
    for j in 0..=n_max {
        let phi = FaberPolynomial { geometry: *g, degree: j };
        let coef = faber_coefficients_in_precision(&phi, g, n_max, 2.0, 4096, precision).unwrap();
        for (n, v) in coef.values.iter().enumerate() {
            let target = if n == j { 1.0 } else { 0.0 };
            let e = (v - target).norm();
            worst = worst.max(e);
            worst_scaled = worst_scaled.max(e / 2f64.powi(j as i32));
        }
    }
    (worst, worst_scaled)
}

#[test]
fn biorthogonality_in_double_double() {
    for g in kinds() {
        let (worst, _) = biorthogonality(&g, 32, Precision::DoubleDouble);
        assert!(worst < 1e-9, "{:?}: {worst:e}", g.kind());
    }
}

#[test]
fn biorthogonality_in_double_sits_at_the_rounding_floor() {
    // sampling Φ_j on |Φ| = 2 carries absolute rounding of order ε 2^j
    for g in kinds() {
        let (_, scaled) = biorthogonality(&g, 32, Precision::Double);
        assert!(scaled < 64.0 * f64::EPSILON, "{:?}: {scaled:e}", g.kind());
    }
}

#[test]
fn recurrence_matches_contour_integral() {
    for g in kinds() {
        let basis = faber_basis(&g, 20);
        for (n, p) in basis.polys().iter().enumerate() {
            let q = faber_polynomial_by_quadrature(&g, n, 2.0, 4096, Precision::DoubleDouble).unwrap();
            let d = p.coeff_distance(&q);
            assert!(d < 1e-9, "{:?} n = {n}: {d:e}", g.kind());
        }
    }
}

#[test]
fn coefficients_do_not_depend_on_the_level_curve() {
    let cases = [
        (Geometry::unit_disk(), c(3.0, 0.0), 1.5, 2.5),
        (Geometry::unit_segment(), c(2.125, 0.0), 1.5, 3.0),
        (Geometry::ellipse(c(0.0, 0.0), 0.0, 1.0, 2.0).unwrap(), c(0.0, 3.0), 2.2, 2.8),
    ];
    for (g, pole, r1, r2) in cases {
        let f = FnFunction(move |z: Complex64| 1.0 / (z - pole));
        assert!(g.level(pole) > r2);
        let a = faber_coefficients(&f, &g, 30, r1, 4096).unwrap();
        let b = faber_coefficients(&f, &g, 30, r2, 4096).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficients_are_linear(ar in -3.0f64..3.0, ai in -3.0f64..3.0, br in -3.0f64..3.0, bi in -3.0f64..3.0) {
        let (a, b) = (c(ar, ai), c(br, bi));
        let g = Geometry::unit_segment();
        let f = |z: Complex64| 1.0 / (z - 3.0);
        let h = |z: Complex64| z * z / (z - c(0.0, 2.0));
        let combo = FnFunction(move |z: Complex64| a * f(z) + b * h(z));
        let cf = faber_coefficients(&FnFunction(f), &g, 20, 1.8, 512).unwrap();
        let ch = faber_coefficients(&FnFunction(h), &g, 20, 1.8, 512).unwrap();
        let cc = faber_coefficients(&combo, &g, 20, 1.8, 512).unwrap();
        for n in 0..=20 {
            prop_assert!((cc.values[n] - (a * cf.values[n] + b * ch.values[n])).norm() < 1e-12);
        }
    }
}

#[test]
fn cauchy_coefficients_on_the_disk() {
    let f = FnFunction(|z: Complex64| 1.0 / (z - 2.0));
    let coef = faber_coefficients(&f, &Geometry::unit_disk(), 40, 1.5, 4096).unwrap();
    for (n, v) in coef.values.iter().enumerate() {
        assert!((v + 0.5f64.powi(n as i32 + 1)).norm() < 1e-15);
    }
    assert_eq!(coef.rho_used, 1.5);
    assert_eq!(coef.nodes_used, 4096);
}

#[test]
fn constant_function() {
    for g in kinds() {
        let coef = faber_coefficients(&FnFunction(|_| c(1.0, 0.0)), &g, 10, 2.0, 64).unwrap();
        assert!((coef.values[0] - 1.0).norm() < 1e-15);
        assert!(coef.values[1..].iter().all(|v| v.norm() < 1e-15));
        assert!(matches!(estimate_rho0(&coef, 1..11), Err(Error::IndeterminateRate { .. })));
    }
}

#[test]
fn truncation_error_decays_at_the_predicted_rate() {
    let g = Geometry::unit_disk();
    let f = |z: Complex64| 1.0 / (z - 2.0);
    let coef = faber_coefficients(&FnFunction(f), &g, 60, 1.5, 4096).unwrap();
    let basis = faber_basis(&g, 60);
    // |Φ(z)| = 1, ρ₀ = 2: error ~ (1/2)^n
    let z = Complex64::from_polar(1.0, 0.3);
    let errors: Vec<(usize, f64)> = (1..=40)
        .map(|n| (n, (evaluate_faber_series(&coef, &basis, z, n).unwrap() - f(z)).norm()))
        .collect();
    let fit = fit_rate(&errors, 1e-13, 1.0).unwrap();
    assert!((fit.rate - 0.5).abs() < 0.01, "{}", fit.rate);
    let at_zero = evaluate_faber_series(&coef, &basis, c(0.0, 0.0), 61).unwrap();
    assert!((at_zero + 0.5).norm() < 1e-15);
}

#[test]
fn root_test_estimates() {
    let disk = faber_coefficients(&FnFunction(|z: Complex64| 1.0 / (z - 2.0)), &Geometry::unit_disk(), 30, 1.5, 4096).unwrap();
    let r = estimate_rho0(&disk, 5..31).unwrap();
    assert!((r - 2.0).abs() < 0.05, "{r}");
    let seg = faber_coefficients(&FnFunction(|z: Complex64| 1.0 / (z - 1.25)), &Geometry::unit_segment(), 25, 1.5, 4096).unwrap();
    let r = estimate_rho0(&seg, 5..26).unwrap();
    assert!((r - 2.0).abs() < 0.1, "{r}");
}
