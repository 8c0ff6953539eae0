mod common;

use common::small_profile;
use sbpp::energy::energy_identities;
use sbpp::nehari::SolverOptions;
use sbpp::photography::bump::{core_cells, MIN_CORE_CELLS};
use sbpp::photography::{
    build_bump, compute_limit_ground_state, cone_point, psi_map, reference_bump, BumpSpec, GroundStateProfile,
};
use sbpp::{ModelParams, SbppError, TorusSpec};

fn setup(n: usize, eps: f64) -> (TorusSpec, ModelParams) {
    (
        TorusSpec::cube(1.0, n).unwrap(),
        ModelParams::new(eps, 4.25, 0.25, 0.45).unwrap(),
    )
}

#[test]
fn profile_is_positive_converged_and_radially_nonincreasing() {
    let prof = small_profile();
    assert!(prof.field.min() > 0.0);
    assert!(prof.nehari_residual <= 1e-8);
    let spec = prof.field.spec();
    let n = spec.resolution()[0];
    let c = n / 2;
    for a in 0..3 {
        for dir in [1i64, -1] {
            let ray: Vec<f64> = (0..n / 2)
                .map(|m| {
                    let mut idx = [c; 3];
                    idx[a] = (c as i64 + dir * m as i64).rem_euclid(n as i64) as usize;
                    prof.field.values()[spec.index(idx[0], idx[1], idx[2])]
                })
                .collect();
            assert!(
                ray.windows(2).all(|w| w[1] <= w[0] + 1e-6 * ray[0]),
                "axis {a} dir {dir}"
            );
        }
    }
}

#[test]
fn profile_save_load_roundtrip() {
    let prof = small_profile();
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("u");
    prof.save(&stem).unwrap();
    let back = GroundStateProfile::load(&stem).unwrap();
    assert_eq!(back.field, prof.field);
    assert_eq!(back.m_inf_estimate, prof.m_inf_estimate);
    assert_eq!(back.core_diameter, prof.core_diameter);
    assert_eq!(back.p, prof.p);
}

#[test]
fn bump_peak_and_support() {
    let prof = small_profile();
    let (spec, params) = setup(32, 0.25);
    let xi = spec.point(spec.index(10, 20, 5));
    let w = build_bump(&BumpSpec::new(xi, &params), prof, &spec).unwrap();
    let [i, j, k] = spec.nearest_index(xi);
    assert!((w.values()[spec.index(i, j, k)] - prof.peak()).abs() <= 1e-14 * prof.peak());
    for idx in 0..spec.len() {
        if spec.distance(spec.point(idx), xi) >= params.cutoff_r {
            assert!(w.values()[idx].abs() <= 1e-14);
        }
    }
}

#[test]
fn bump_and_psi_are_translation_equivariant() {
    let prof = small_profile();
    let (spec, params) = setup(32, 0.25);
    let h = spec.spacing();
    let xi = [0.31, 0.52, 0.77];
    let shift = [3i64, -5, 11];
    let moved = spec.wrap([0, 1, 2].map(|a| xi[a] + shift[a] as f64 * h[a]));
    let a = build_bump(&BumpSpec::new(xi, &params), prof, &spec).unwrap();
    let b = build_bump(&BumpSpec::new(moved, &params), prof, &spec).unwrap();
    assert_eq!(a.shift(shift), b);
    let pa = psi_map(xi, &params, prof, &spec).unwrap();
    let pb = psi_map(moved, &params, prof, &spec).unwrap();
    let d = &pa.u.shift(shift) - &pb.u;
    assert!(d.max_abs() <= 1e-12 * pa.u.max_abs());
    assert!((pa.energy.total - pb.energy.total).abs() <= 1e-12 * pa.energy.total);
    assert!(energy_identities(&pa.u, &params).unwrap().max_rel_deviation <= 1e-8);
}

#[test]
fn unresolved_bump_is_rejected() {
    let prof = small_profile();
    let (spec, params) = setup(16, 0.05);
    assert!(core_cells(prof, params.eps, &spec) < MIN_CORE_CELLS);
    let err = build_bump(&BumpSpec::new([0.5; 3], &params), prof, &spec).unwrap_err();
    assert!(matches!(err, SbppError::Unresolved { .. }), "{err}");
}

#[test]
fn cone_endpoints_and_midpoint() {
    let prof = small_profile();
    let (spec, params) = setup(32, 0.25);
    let xi0 = [0.25; 3];
    let v = reference_bump(xi0, &params, prof, &spec).unwrap();
    let xi = [0.75, 0.5, 0.25];
    let w = build_bump(&BumpSpec::new(xi, &params), prof, &spec).unwrap();
    assert_eq!(cone_point(1.0, xi, &v, &params, prof, &spec).unwrap(), v);
    assert_eq!(cone_point(0.0, xi, &v, &params, prof, &spec).unwrap(), w);
    let w0 = build_bump(&BumpSpec::new(xi0, &params), prof, &spec).unwrap();
    let mid = cone_point(0.5, xi0, &v, &params, prof, &spec).unwrap();
    let avg = v.zip_map(&w0, |a, b| 0.5 * (a + b));
    assert!((&mid - &avg).max_abs() <= 1e-15 * avg.max_abs());
    for theta in [0.0, 0.3, 0.7, 1.0] {
        let u = cone_point(theta, xi, &v, &params, prof, &spec).unwrap();
        assert!(u.min() >= 0.0 && u.has_positive_part());
    }
    assert!(cone_point(1.5, xi, &v, &params, prof, &spec).is_err());
}

#[test]
fn profiles_for_two_exponents_differ() {
    let opts = SolverOptions {
        tol: 1e-7,
        ..Default::default()
    };
    let other = compute_limit_ground_state(8.0, 32, 4.5, 0.25, &opts).unwrap();
    let base = small_profile();
    assert!(other.m_inf_estimate > 0.0 && base.m_inf_estimate > 0.0);
    assert!(other.field.min() > 0.0);
    assert!((other.m_inf_estimate - base.m_inf_estimate).abs() > 1e-3 * base.m_inf_estimate);
}
