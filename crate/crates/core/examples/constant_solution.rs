//! The spatially constant solution: closed-form amplitude, its energy, and
//! the energy growth as ε shrinks.

use sbpp::energy::{energy_j, grad_j};
use sbpp::nehari::constant_solution;
use sbpp::{ModelParams, ScalarField, TorusSpec};

fn main() -> sbpp::Result<()> {
    let side = 2.0 * std::f64::consts::PI;
    let spec = TorusSpec::cube(side, 8)?;
    let volume = side.powi(3);
    for eps in [1.0, 0.5, 0.25] {
        let params = ModelParams::new(eps, 6.0, 1.0, 2.0)?;
        let c = constant_solution(&params, volume)?;
        let u = ScalarField::constant(spec, c.c_star);
        println!(
            "eps {eps:<5} c* = {:.12}  root residual {:.1e}  J = {:.8e}  J on grid = {:.8e}  max|J'| = {:.1e}",
            c.c_star,
            c.residual,
            c.energy,
            energy_j(&u, &params)?.total,
            grad_j(&u, &params)?.max_abs()
        );
    }
    Ok(())
}
