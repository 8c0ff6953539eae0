#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sbpp::nehari::SolverOptions;
use sbpp::photography::{compute_limit_ground_state, GroundStateProfile};
use sbpp::{ScalarField, TorusSpec};

/// `offset + Σ a_j cos(k_j·x + θ_j)` with `modes` random wave vectors of
/// integer entries in `[-kmax, kmax]`.
pub fn band_limited(spec: TorusSpec, seed: u64, modes: usize, kmax: i32, offset: f64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = spec.side_lengths();
    let waves: Vec<([f64; 3], f64, f64)> = (0..modes)
        .map(|_| {
            let m = [0, 1, 2].map(|a| 2.0 * PI * rng.gen_range(-kmax..=kmax) as f64 / l[a]);
            (m, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    ScalarField::from_fn(spec, |x| {
        offset
            + waves
                .iter()
                .map(|(k, a, th)| a * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + th).cos())
                .sum::<f64>()
    })
}

pub fn max_rel(a: &ScalarField, b: &ScalarField) -> f64 {
    let d = a - b;
    d.max_abs() / a.max_abs().max(b.max_abs())
}

/// A cheap limit ground state (box 8, 32 points) shared by a test binary.
pub fn small_profile() -> &'static GroundStateProfile {
    static P: OnceLock<GroundStateProfile> = OnceLock::new();
    P.get_or_init(|| {
        let opts = SolverOptions {
            tol: 1e-8,
            ..SolverOptions::default()
        };
        compute_limit_ground_state(8.0, 32, 4.25, 0.25, &opts).expect("profile converges")
    })
}
