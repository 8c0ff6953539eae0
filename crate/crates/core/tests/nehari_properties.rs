mod common;

use common::band_limited;
use sbpp::energy::energy_identities;
use sbpp::nehari::{minimize_on_nehari, multistart_search, project_to_nehari, InitSpec, SolverOptions};
use sbpp::{ModelParams, TorusSpec};

fn params(eps: f64) -> ModelParams {
    ModelParams::new(eps, 4.25, 0.25, 0.45).unwrap()
}

#[test]
fn projection_residual_idempotence_and_homogeneity() {
    let spec = TorusSpec::cube(1.0, 8).unwrap();
    let p = params(0.3);
    for seed in 0..50 {
        let u = band_limited(spec, seed, 4, 2, (seed % 5) as f64 * 0.2 + 0.1);
        if !u.has_positive_part() {
            continue;
        }
        let s = project_to_nehari(&u, &p).unwrap();
        assert!(
            s.relative_nehari_residual() <= 1e-10,
            "seed {seed}: {} t {}",
            s.relative_nehari_residual(),
            s.t_u
        );
        let again = project_to_nehari(&s.u, &p).unwrap();
        assert!((again.t_u - 1.0).abs() <= 1e-10, "seed {seed}: {}", again.t_u);
        for scale in [0.1, 3.0, 250.0] {
            let su = project_to_nehari(&u.scale(scale), &p).unwrap();
            assert!(
                (su.t_u - s.t_u / scale).abs() <= 1e-10 * s.t_u / scale,
                "seed {seed}, s {scale}"
            );
        }
    }
}

#[test]
fn descent_is_monotone_and_converged_states_satisfy_identities() {
    let spec = TorusSpec::cube(1.0, 24).unwrap();
    let p = params(0.2);
    let u0 = InitSpec::OneBump { center: [0.5; 3] }.build(&spec, &p).unwrap();
    let s = minimize_on_nehari(
        &u0,
        &p,
        &SolverOptions {
            tol: 1e-7,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(s.is_converged(), "{:?}", s.status);
    assert!(s.energy_trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(s.energy.total > 0.0);
    assert!(s.relative_nehari_residual() <= 1e-10);
    assert!(energy_identities(&s.u, &p).unwrap().max_rel_deviation <= 1e-8);
}

#[test]
fn positive_part_floor_is_stable_across_eps() {
    let opts = SolverOptions {
        tol: 1e-7,
        ..Default::default()
    };
    let floors: Vec<f64> = [(0.25, 24), (0.2, 24), (0.15, 32)]
        .iter()
        .map(|&(eps, n)| {
            let spec = TorusSpec::cube(1.0, n).unwrap();
            let p = params(eps);
            let u0 = InitSpec::OneBump { center: [0.5; 3] }.build(&spec, &p).unwrap();
            let s = minimize_on_nehari(&u0, &p, &opts).unwrap();
            assert!(s.is_converged());
            s.energy.power.powf(1.0 / p.p)
        })
        .collect();
    let lo = floors.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = floors.iter().cloned().fold(0.0, f64::max);
    assert!(lo > 1.0, "{floors:?}");
    assert!(hi / lo < 1.1, "{floors:?}");
}

#[test]
fn multistart_identifies_translates_and_handles_no_inits() {
    let spec = TorusSpec::cube(1.0, 24).unwrap();
    let p = params(0.2);
    let a = InitSpec::OneBump { center: [0.5; 3] }.build(&spec, &p).unwrap();
    let b = a.shift([5, -7, 3]);
    let opts = SolverOptions {
        tol: 1e-7,
        ..Default::default()
    };
    let out = multistart_search(&[a, b], &p, &opts, 0.1).unwrap();
    assert_eq!(out.states.len(), 1);
    assert_eq!(
        out.runs.iter().map(|r| r.class).collect::<Vec<_>>(),
        vec![Some(0), Some(0)]
    );
    let empty = multistart_search(&[], &p, &opts, 0.1).unwrap();
    assert!(empty.states.is_empty() && empty.runs.is_empty());
}

#[test]
fn constant_init_stays_constant_and_is_highest() {
    let spec = TorusSpec::cube(1.0, 24).unwrap();
    let p = params(0.2);
    let inits: Vec<_> = [InitSpec::OneBump { center: [0.5; 3] }, InitSpec::Constant]
        .iter()
        .map(|i| i.build(&spec, &p).unwrap())
        .collect();
    let out = multistart_search(
        &inits,
        &p,
        &SolverOptions {
            tol: 1e-7,
            ..Default::default()
        },
        0.1,
    )
    .unwrap();
    assert_eq!(out.states.len(), 2);
    let top = &out.states[1];
    assert!(top.u.max() - top.u.min() <= 1e-12 * top.u.max());
    assert!(out.states[0].energy.total < top.energy.total);
}
