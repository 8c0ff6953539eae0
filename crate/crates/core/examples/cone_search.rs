//! Samples the cone between a reference bump and bumps at other centers,
//! then refines the maximizer toward a higher-energy critical point.

use sbpp::nehari::SolverOptions;
use sbpp::photography::{compute_limit_ground_state, high_energy_search, ConeGrid, MinimaxOptions};
use sbpp::{ModelParams, TorusSpec};

fn main() -> sbpp::Result<()> {
    let (p, q) = (4.25, 0.25);
    let profile = compute_limit_ground_state(
        8.0,
        32,
        p,
        q,
        &SolverOptions {
            tol: 1e-8,
            ..Default::default()
        },
    )?;
    let target = TorusSpec::cube(1.0, 24)?;
    let params = ModelParams::new(0.2, p, q, 0.45)?;
    let grid = ConeGrid::uniform(&target, [0.25; 3], 7, 1)?;
    let opts = MinimaxOptions {
        max_iter: 100,
        ..Default::default()
    };
    let out = high_energy_search(&params, &profile, &target, &grid, &opts)?;

    println!(
        "cone maximum c_eps = {:.6} at θ = {:.3}, ξ = {:?}",
        out.c_eps, out.best.theta, out.best.xi
    );
    println!(
        "refined: {} with J = {:.6}, residual {:.2e} (one-bump support J = {:?})",
        out.status.as_str(),
        out.state.energy.total,
        out.state.grad_residual,
        out.support_energy
    );
    for d in &out.diagnostics {
        println!("  {d}");
    }
    Ok(())
}
