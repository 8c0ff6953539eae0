//! Computes the whole-space ground state on a large box, plants ε-scaled
//! copies of it at several centers of the unit torus and projects them onto
//! the Nehari manifold.

use sbpp::nehari::SolverOptions;
use sbpp::photography::{compute_limit_ground_state, psi_map};
use sbpp::{ModelParams, TorusSpec};

fn main() -> sbpp::Result<()> {
    let (p, q) = (4.25, 0.25);
    let opts = SolverOptions {
        tol: 1e-8,
        ..Default::default()
    };
    let profile = compute_limit_ground_state(10.0, 40, p, q, &opts)?;
    println!(
        "limit ground state: m_inf ≈ {:.6}, peak {:.5}, core diameter {:.4}, {} steps",
        profile.m_inf_estimate,
        profile.peak(),
        profile.core_diameter,
        profile.iterations
    );

    let target = TorusSpec::cube(1.0, 24)?;
    let params = ModelParams::new(0.2, p, q, 0.45)?;
    for xi in [[0.5, 0.5, 0.5], [0.1, 0.2, 0.3], [0.9, 0.05, 0.6]] {
        let s = psi_map(xi, &params, &profile, &target)?;
        println!(
            "center {xi:?}: J(Ψ) = {:.6}, t_W = {:.5}, J(Ψ)/m_inf = {:.5}",
            s.energy.total,
            s.t_u,
            s.energy.total / profile.m_inf_estimate
        );
    }
    Ok(())
}
