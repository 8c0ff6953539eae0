mod common;

use std::f64::consts::PI;

use common::{band_limited, max_rel};
use sbpp::bopp_podolsky::{check_phi_properties, phi_multiplier, solve_phi};
use sbpp::{ModelParams, ScalarField, TorusSpec};

#[test]
fn single_mode_square_matches_closed_form() {
    let l = 1.3;
    let spec = TorusSpec::cube(l, 16).unwrap();
    let params = ModelParams::new(0.2, 4.5, 1.0, 0.3).unwrap();
    let k = 2.0 * PI / l;
    // u² = ½ + ½cos(2k y)
    let u = ScalarField::from_fn(spec, |x| (k * x[1]).cos());
    let m = phi_multiplier(4.0 * k * k, params.eps);
    let exact = ScalarField::from_fn(spec, |x| 2.0 * PI * (1.0 + m * (2.0 * k * x[1]).cos()));
    let (phi, _) = solve_phi(&u, &params).unwrap();
    assert!(max_rel(&phi, &exact) <= 1e-12);
}

#[test]
fn scaling_law_on_random_fields() {
    let spec = TorusSpec::cube(1.0, 16).unwrap();
    let params = ModelParams::new(0.1, 4.5, 1.0, 0.3).unwrap();
    for seed in 0..5 {
        let u = band_limited(spec, seed, 6, 4, 0.0);
        for t in [-3.0, 0.5, 2.0, 1.0] {
            let pr = check_phi_properties(&u, &params, t).unwrap();
            assert!(pr.scaling_deviation <= 1e-12, "t={t}: {}", pr.scaling_deviation);
        }
    }
}

#[test]
fn mean_of_phi_is_four_pi_mean_of_square() {
    let spec = TorusSpec::new([1.0, 2.0, 0.7], [10, 12, 8]).unwrap();
    let params = ModelParams::new(0.3, 4.5, 1.0, 0.3).unwrap();
    let u = band_limited(spec, 11, 7, 3, 0.4);
    let (phi, _) = solve_phi(&u, &params).unwrap();
    let lhs = phi.integral();
    let rhs = 4.0 * PI * u.inner(&u);
    assert!((lhs - rhs).abs() <= 1e-12 * rhs);
}

/// Largest `‖φ(u)‖_{H²} / ∫u²` over a fixed suite of fields.
fn boundedness_constant(n: usize) -> f64 {
    let spec = TorusSpec::cube(1.0, n).unwrap();
    let params = ModelParams::new(0.1, 4.5, 1.0, 0.3).unwrap();
    (0..8)
        .map(|seed| {
            let u = band_limited(spec, seed, 5, 3, if seed % 2 == 0 { 0.0 } else { 0.5 });
            let (_, rep) = solve_phi(&u, &params).unwrap();
            rep.h2_norm / rep.source_l2
        })
        .fold(0.0, f64::max)
}

#[test]
fn h2_bound_constant_is_stable_across_resolutions() {
    let c16 = boundedness_constant(16);
    let c24 = boundedness_constant(24);
    let c32 = boundedness_constant(32);
    assert!(c16 > 0.0 && c16.is_finite());
    for c in [c24, c32] {
        assert!((c - c16).abs() <= 0.1 * c16, "{c16} {c24} {c32}");
    }
}

#[test]
fn negative_minimum_is_reported_not_fatal() {
    // a sharp bump at moderate ε produces a slightly negative φ
    let spec = TorusSpec::cube(1.0, 32).unwrap();
    let params = ModelParams::new(0.05, 4.5, 1.0, 0.3).unwrap();
    let u = ScalarField::from_fn(spec, |x| {
        let d = spec.displacement(x, [0.5; 3]);
        (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (2.0 * 0.05 * 0.05)).exp()
    });
    let pr = check_phi_properties(&u, &params, 1.0).unwrap();
    assert_eq!(pr.scaling_deviation, 0.0);
    assert!(pr.min_phi < 0.0 && !pr.nonnegative);
}
