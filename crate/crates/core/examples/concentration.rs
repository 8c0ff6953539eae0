//! Where a ground state concentrates: barycenter, mass near it, the
//! good-partition floor, and how the bump pieces approach their limits.

use sbpp::diagnostics::{audit_csv, concentration_center, good_partition_check, w_limits_audit, PartitionSpec};
use sbpp::nehari::{minimize_on_nehari, InitSpec, SolverOptions};
use sbpp::photography::compute_limit_ground_state;
use sbpp::{ModelParams, TorusSpec};

fn main() -> sbpp::Result<()> {
    let spec = TorusSpec::cube(1.0, 24)?;
    let params = ModelParams::new(0.2, 4.25, 0.25, 0.45)?;
    let opts = SolverOptions {
        tol: 1e-7,
        ..Default::default()
    };
    let u0 = InitSpec::OneBump {
        center: [0.3, 0.6, 0.7],
    }
    .build(&spec, &params)?;
    let s = minimize_on_nehari(&u0, &params, &opts)?;

    let c = concentration_center(&s.u, &params, 0.2)?;
    println!(
        "barycenter {:?}, resultant lengths {:?}",
        c.barycenter, c.resultant_length
    );
    println!(
        "max of Γ at {:?}, {:.1}% of ∫Γ within 0.2",
        c.center_q,
        100.0 * c.mass_fraction_in_ball
    );

    let part = PartitionSpec::cubes(&spec, params.eps)?;
    let w = good_partition_check(&s.u, &params, &part)?;
    println!(
        "best partition cell {} of {}: |u⁺|ᵖ = {:.4}",
        w.cell,
        part.cells.len(),
        w.value
    );

    let profile = compute_limit_ground_state(
        8.0,
        32,
        4.25,
        0.25,
        &SolverOptions {
            tol: 1e-8,
            ..Default::default()
        },
    )?;
    let targets = [
        TorusSpec::cube(1.0, 24)?,
        TorusSpec::cube(1.0, 48)?,
        TorusSpec::cube(1.0, 24)?,
    ];
    let rows = w_limits_audit([0.5; 3], &[0.2, 0.1, 0.05], &params, &profile, &targets)?;
    print!("{}", audit_csv(&rows));
    Ok(())
}
