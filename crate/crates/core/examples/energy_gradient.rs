//! Energy split, gradient check against a central difference, and the
//! Nehari function along a ray.

use sbpp::energy::{energy_j, grad_j, nehari_n};
use sbpp::{ModelParams, ScalarField, TorusSpec};

fn main() -> sbpp::Result<()> {
    let spec = TorusSpec::cube(1.0, 16)?;
    let params = ModelParams::new(0.25, 4.5, 0.5, 0.4)?;
    let u = ScalarField::from_fn(spec, |x| {
        1.0 + 0.5 * (2.0 * std::f64::consts::PI * x[0]).cos()
            + 0.25 * (2.0 * std::f64::consts::PI * (x[1] + x[2])).sin()
    });
    let v = ScalarField::from_fn(spec, |x| {
        (2.0 * std::f64::consts::PI * x[0]).cos() + 0.3 * (2.0 * std::f64::consts::PI * (x[1] + 2.0 * x[2])).sin()
    });

    let e = energy_j(&u, &params)?;
    println!(
        "J = {:.10}  (kinetic+mass {:.6}, coupling {:.6}, power {:.6})",
        e.total, e.kinetic_mass, e.coupling, e.power
    );

    let g = grad_j(&u, &params)?;
    let analytic = g.inner(&v);
    for h in [1e-2, 1e-3, 1e-4] {
        let fd = (energy_j(&u.axpy(h, &v), &params)?.total - energy_j(&u.axpy(-h, &v), &params)?.total) / (2.0 * h);
        println!("h {h:.0e}: <J'(u), v> = {analytic:.10}, central difference {fd:.10}");
    }

    for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("N(t u) at t = {t}: {:+.6e}", nehari_n(&u.scale(t), &params)?);
    }
    Ok(())
}
