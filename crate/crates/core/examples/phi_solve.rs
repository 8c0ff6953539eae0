//! Solves the Bopp-Podolsky equation for a Gaussian charge density and
//! checks the quadratic scaling of the potential.

use sbpp::bopp_podolsky::{check_phi_properties, solve_phi};
use sbpp::{ModelParams, ScalarField, TorusSpec};

fn main() -> sbpp::Result<()> {
    let spec = TorusSpec::cube(1.0, 32)?;
    for eps in [0.4, 0.2, 0.1] {
        let params = ModelParams::new(eps, 4.5, 1.0, 0.4)?;
        let u = ScalarField::from_fn(spec, |x| {
            let d = spec.displacement(x, [0.5; 3]);
            (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (2.0 * eps * eps)).exp()
        });
        let (phi, report) = solve_phi(&u, &params)?;
        let props = check_phi_properties(&u, &params, 3.0)?;
        println!(
            "eps {eps:<4}  max phi {:.6e}  min phi {:+.3e}  |phi|_H2 {:.4e}  scaling dev {:.1e}",
            phi.max(),
            report.min_value,
            report.h2_norm,
            props.scaling_deviation
        );
    }
    Ok(())
}
