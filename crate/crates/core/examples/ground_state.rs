//! Multi-start descent on the Nehari manifold: a one-bump, a two-bump, the
//! constant and a random start, grouped into distinct critical points.

use sbpp::diagnostics::concentration_center;
use sbpp::nehari::{multistart_search, InitSpec, SolverOptions};
use sbpp::{ModelParams, TorusSpec};

fn main() -> sbpp::Result<()> {
    let spec = TorusSpec::cube(1.0, 24)?;
    let params = ModelParams::new(0.2, 4.25, 0.25, 0.45)?;
    let inits = [
        InitSpec::OneBump { center: [0.5; 3] },
        InitSpec::TwoBump {
            center: [0.25, 0.5, 0.5],
            axis: 0,
        },
        InitSpec::Constant,
        InitSpec::Random { seed: 7 },
    ];
    let fields = inits
        .iter()
        .map(|i| i.build(&spec, &params))
        .collect::<sbpp::Result<Vec<_>>>()?;
    let opts = SolverOptions {
        tol: 1e-7,
        ..Default::default()
    };
    let out = multistart_search(&fields, &params, &opts, 0.1)?;

    for (init, run) in inits.iter().zip(&out.runs) {
        println!(
            "{init}: {} after {} steps, J = {:.6}, class {:?}",
            run.status.as_str(),
            run.iterations,
            run.energy,
            run.class
        );
    }
    for (k, s) in out.states.iter().enumerate() {
        let c = concentration_center(&s.u, &params, 0.5 * params.cutoff_r)?;
        println!(
            "class {k}: J = {:.6}, residual {:.1e}, mass fraction near barycenter {:.3}",
            s.energy.total, s.grad_residual, c.mass_fraction_in_ball
        );
    }
    Ok(())
}
