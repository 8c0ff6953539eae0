//! Runs an experiment from configuration text, the same way the `sbpp`
//! binary does, and prints the report.

use sbpp::cli::{run_experiment, validate_config};

const CONFIG: &str = "
mode = ground
torus.L = 1
torus.N = 20
model.eps = 0.25
model.p = 4.5
model.q = 0.5
solver.tol = 1e-7
search.inits = one-bump@0.5,0.5,0.5; constant; random
";

fn main() -> sbpp::Result<()> {
    let dir = std::env::temp_dir().join("sbpp-example-run");
    let cfg = validate_config(&format!("{CONFIG}output.dir = {}\n", dir.display()))?;
    let report = run_experiment(&cfg)?;
    print!("{}", report.to_text());
    println!("exit code would be {}", report.exit_code());
    Ok(())
}
