//! End-to-end checks of the solver on the reference model
//! (p = 4.25, q = 0.25, r = 0.45 on the unit torus). Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::time::Instant;

use common::{band_limited, max_rel};
use sbpp::bopp_podolsky::{check_phi_properties, phi_multiplier, solve_phi};
use sbpp::cli::{run_experiment, validate_config};
use sbpp::diagnostics::concentration_center;
use sbpp::energy::{energy_identities, energy_j, grad_j};
use sbpp::manifold::io::{read_field, write_field};
use sbpp::nehari::{
    constant_solution, minimize_on_nehari, multistart_search, project_to_nehari, InitSpec, NehariState, SolverOptions,
};
use sbpp::photography::{
    compute_limit_ground_state, high_energy_search, psi_map, ConeGrid, GroundStateProfile, MinimaxOptions,
};
use sbpp::{ModelParams, ScalarField, TorusSpec};

const P: f64 = 4.25;
const Q: f64 = 0.25;
const R: f64 = 0.45;
/// ε ladder with matched grid spacing ε/h = 4.8.
const LADDER: [(f64, usize); 3] = [(0.2, 24), (0.1, 48), (0.05, 96)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn model(eps: f64) -> ModelParams {
    ModelParams::new(eps, P, Q, R).unwrap()
}

fn solver(tol: f64) -> SolverOptions {
    SolverOptions {
        tol,
        ..Default::default()
    }
}

fn phi_exactness() -> Outcome {
    let l = 1.0;
    let spec = TorusSpec::cube(l, 64).unwrap();
    let params = model(0.1);
    let mut worst_mode = 0.0f64;
    for m in [1.0, 3.0, 7.0] {
        let k = 2.0 * PI * m / l;
        let u = ScalarField::from_fn(spec, |x| (k * (x[0] + x[2])).cos());
        let mult = phi_multiplier(8.0 * k * k, params.eps);
        let exact = ScalarField::from_fn(spec, |x| 2.0 * PI * (1.0 + mult * (2.0 * k * (x[0] + x[2])).cos()));
        let (phi, _) = solve_phi(&u, &params).unwrap();
        worst_mode = worst_mode.max(max_rel(&phi, &exact));
    }
    let mut worst_scale = 0.0f64;
    for seed in 0..3 {
        let u = band_limited(spec, seed, 8, 6, 0.3);
        for t in [-3.0, 0.5, 2.0] {
            worst_scale = worst_scale.max(check_phi_properties(&u, &params, t).unwrap().scaling_deviation);
        }
    }
    outcome(
        worst_mode <= 1e-12 && worst_scale <= 1e-12,
        format!("single-mode rel err {worst_mode:.2e}, scaling dev {worst_scale:.2e} (tol 1e-12, 64^3)"),
    )
}

fn gradient_check() -> Outcome {
    let spec = TorusSpec::cube(1.0, 32).unwrap();
    let params = model(0.2);
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let u = band_limited(spec, seed, 6, 4, 0.8);
        // the `u` component keeps the directional derivative away from zero
        let h = band_limited(spec, 100 + seed, 6, 4, 0.0).axpy(0.3, &u);
        let exact = grad_j(&u, &params).unwrap().inner(&h);
        let best = (2..=7)
            .map(|k| {
                let d = 10f64.powi(-k);
                let jp = energy_j(&u.axpy(d, &h), &params).unwrap().total;
                let jm = energy_j(&u.axpy(-d, &h), &params).unwrap().total;
                ((jp - jm) / (2.0 * d) - exact).abs() / exact.abs()
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    outcome(
        worst <= 1e-6,
        format!("worst relative error {worst:.2e} over 20 fields at 32^3 (tol 1e-6)"),
    )
}

fn identity_triple(converged: &[(&ModelParams, &NehariState)]) -> Outcome {
    let spec = TorusSpec::cube(1.0, 16).unwrap();
    let params = model(0.2);
    let mut worst_random = 0.0f64;
    for seed in 0..50 {
        let u = band_limited(spec, seed, 5, 3, 0.2 * (seed % 5) as f64 + 0.1);
        let s = project_to_nehari(&u, &params).unwrap();
        worst_random = worst_random.max(energy_identities(&s.u, &params).unwrap().max_rel_deviation);
    }
    let mut worst_conv = 0.0f64;
    for (p, s) in converged {
        worst_conv = worst_conv.max(energy_identities(&s.u, p).unwrap().max_rel_deviation);
    }
    outcome(
        worst_random <= 1e-8 && worst_conv <= 1e-8,
        format!(
            "max deviation {worst_random:.2e} on 50 projected fields, {worst_conv:.2e} on {} converged states (tol 1e-8)",
            converged.len()
        ),
    )
}

fn constant_checks() -> Outcome {
    let side = 2.0 * PI;
    let spec = TorusSpec::cube(side, 8).unwrap();
    let vol = side.powi(3);
    let p6 = ModelParams::new(1.0, 6.0, 1.0, 2.0).unwrap();
    let c = constant_solution(&p6, vol).unwrap();
    let oracle = (2.0 * PI + (4.0 * PI * PI + 1.0).sqrt()).sqrt();
    let u = ScalarField::constant(spec, c.c_star);
    let grad = grad_j(&u, &p6).unwrap().max_abs();
    let grid_energy = energy_j(&u, &p6).unwrap().total;
    let energy_dev = (grid_energy - c.energy).abs() / c.energy;
    let half = constant_solution(&ModelParams::new(0.5, 6.0, 1.0, 2.0).unwrap(), vol).unwrap();
    let ratio_dev = (half.energy / c.energy - 8.0).abs();
    let model_c = constant_solution(&model(0.1), 1.0).unwrap();
    let pass = c.residual <= 1e-12
        && model_c.residual <= 1e-12
        && (c.c_star - oracle).abs() <= 1e-12
        && grad <= 1e-10
        && energy_dev <= 1e-10
        && ratio_dev <= 1e-12 * 8.0;
    outcome(
        pass,
        format!(
            "c* = {:.6} (oracle {oracle:.6}), residual {:.1e}, max|J'| {grad:.1e}, energy dev {energy_dev:.1e}, J(eps/2)/J(eps) - 8 = {ratio_dev:.1e}",
            c.c_star, c.residual
        ),
    )
}

fn limit_ground_state() -> Outcome {
    let a = compute_limit_ground_state(12.0, 60, P, Q, &solver(1e-8)).unwrap();
    let b = compute_limit_ground_state(16.0, 80, P, Q, &solver(1e-8)).unwrap();
    let spread = (a.m_inf_estimate - b.m_inf_estimate).abs() / b.m_inf_estimate;
    let positive = a.field.min() > 0.0 && b.field.min() > 0.0;
    let res = a.nehari_residual.abs().max(b.nehari_residual.abs());
    outcome(
        spread <= 0.01 && positive && res <= 1e-8,
        format!(
            "m_inf {:.6} (box 12, 60^3) vs {:.6} (box 16, 80^3): {:.2e} apart; positive {positive}; Nehari residual {res:.1e}",
            a.m_inf_estimate, b.m_inf_estimate, spread
        ),
    )
}

struct PhotoRow {
    eps: f64,
    worst_ratio: f64,
    t_w: f64,
}

fn photography(profile: &GroundStateProfile) -> (Outcome, Vec<PhotoRow>, Vec<NehariState>) {
    let centers = [[0.5, 0.5, 0.5], [0.1, 0.2, 0.3], [0.93, 0.07, 0.61]];
    let mut rows = vec![];
    let mut seeds = vec![];
    for (eps, n) in LADDER {
        let target = TorusSpec::cube(1.0, n).unwrap();
        let params = model(eps);
        let states: Vec<NehariState> = centers
            .iter()
            .map(|&xi| psi_map(xi, &params, profile, &target).unwrap())
            .collect();
        let worst = states.iter().map(|s| s.energy.total).fold(f64::MIN, f64::max) / profile.m_inf_estimate;
        let t_w = states
            .iter()
            .map(|s| s.t_u)
            .fold(1.0, |a: f64, t| if (t - 1.0).abs() > (a - 1.0).abs() { t } else { a });
        rows.push(PhotoRow {
            eps,
            worst_ratio: worst,
            t_w,
        });
        seeds.push(states.into_iter().next().unwrap());
    }
    let below = rows.iter().all(|r| r.worst_ratio <= 1.10);
    let shrinking = rows
        .windows(2)
        .all(|w| (w[1].worst_ratio - 1.0).abs() < (w[0].worst_ratio - 1.0).abs());
    let t_ok = (rows[2].t_w - 1.0).abs() <= 0.05;
    let detail = rows
        .iter()
        .map(|r| format!("eps {}: J/m_inf {:.5}, t_W {:.4}", r.eps, r.worst_ratio, r.t_w))
        .collect::<Vec<_>>()
        .join("; ");
    (outcome(below && shrinking && t_ok, detail), rows, seeds)
}

fn main() {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = vec![];
    let mut report = |n: usize, name: &'static str, o: Outcome| {
        eprintln!("criterion {n} done after {:.0} s", start.elapsed().as_secs_f64());
        results.push((n, name, o));
    };

    report(1, "phi solver exactness", phi_exactness());
    report(2, "gradient check", gradient_check());
    report(4, "constant solution", constant_checks());
    report(5, "limit ground state", limit_ground_state());

    let profile = compute_limit_ground_state(12.5, 60, P, Q, &solver(1e-8)).unwrap();
    let (photo, rows, seeds) = photography(&profile);
    report(6, "photography energies", photo);

    // Ground states along the ladder, started from the projected bumps.
    let mut ground: Vec<(ModelParams, NehariState)> = vec![];
    for ((eps, _), seed) in LADDER.iter().zip(&seeds) {
        let params = model(*eps);
        let s = minimize_on_nehari(&seed.u, &params, &solver(1e-7)).unwrap();
        ground.push((params, s));
    }

    let (p_small, s_small) = ground.last().unwrap();
    let c = concentration_center(&s_small.u, p_small, R / 2.0).unwrap();
    report(
        7,
        "concentration",
        outcome(
            s_small.is_converged() && c.mass_fraction_in_ball >= 0.9 && c.barycenter_distance <= R / 2.0,
            format!(
                "eps 0.05 ({}): {:.4} of Γ within r/2, |β - q| = {:.2e}",
                s_small.status.as_str(),
                c.mass_fraction_in_ball,
                c.barycenter_distance
            ),
        ),
    );

    let (eps8, n8) = LADDER[1];
    let params8 = model(eps8);
    let spec8 = TorusSpec::cube(1.0, n8).unwrap();
    let inits: Vec<ScalarField> = [
        InitSpec::OneBump { center: [0.5; 3] },
        InitSpec::TwoBump {
            center: [0.25, 0.5, 0.5],
            axis: 0,
        },
        InitSpec::Constant,
        InitSpec::Random { seed: 3 },
    ]
    .iter()
    .map(|i| i.build(&spec8, &params8).unwrap())
    .collect();
    let multi = multistart_search(&inits, &params8, &solver(1e-7), 0.1).unwrap();
    let constant_energy = constant_solution(&params8, 1.0).unwrap().energy;
    let nonconstant: Vec<&NehariState> = multi
        .states
        .iter()
        .filter(|s| s.is_converged() && (s.energy.total - constant_energy).abs() > 1e-6 * constant_energy)
        .collect();
    let one_bump = nonconstant.iter().map(|s| s.energy.total).fold(f64::INFINITY, f64::min);
    let two_bump = nonconstant
        .iter()
        .map(|s| s.energy.total)
        .filter(|&e| e > one_bump * 1.01)
        .fold(f64::INFINITY, f64::min);

    let cone_eps = |eps: f64, n: usize, refine: bool| {
        let target = TorusSpec::cube(1.0, n).unwrap();
        let grid = ConeGrid::uniform(&target, [0.25; 3], 9, 2).unwrap();
        let opts = MinimaxOptions {
            refine,
            ..Default::default()
        };
        high_energy_search(&model(eps), &profile, &target, &grid, &opts).unwrap()
    };
    let cone = cone_eps(eps8, n8, true);
    let cone_half = cone_eps(LADDER[2].0, LADDER[2].1, false);
    let refined = cone.state.energy.total;
    let between = |e: f64| e > one_bump && e < constant_energy;
    let cone_ratio = cone.c_eps.max(cone_half.c_eps) / cone.c_eps.min(cone_half.c_eps);
    report(
        8,
        "multiplicity",
        outcome(
            nonconstant.len() >= 2 && between(two_bump) && between(refined) && cone_ratio <= 2.0,
            format!(
                "{} non-constant classes; one-bump {one_bump:.4}, two-bump {two_bump:.4}, cone-refined {refined:.4} ({}), constant {constant_energy:.2}; c_eps {:.3} (eps 0.1) vs {:.3} (eps 0.05)",
                nonconstant.len(),
                cone.status.as_str(),
                cone.c_eps,
                cone_half.c_eps
            ),
        ),
    );

    let mut converged: Vec<(&ModelParams, &NehariState)> = ground.iter().map(|(p, s)| (p, s)).collect();
    converged.extend(multi.states.iter().filter(|s| s.is_converged()).map(|s| (&params8, s)));
    report(3, "Nehari identity triple", identity_triple(&converged));

    let m_eps: Vec<f64> = ground.iter().map(|(_, s)| s.energy.total).collect();
    let nonincreasing = m_eps.windows(2).all(|w| w[1] >= w[0]);
    let last_gap = (m_eps[2] - profile.m_inf_estimate).abs() / profile.m_inf_estimate;
    let upper_ok = m_eps
        .iter()
        .zip(&rows)
        .all(|(m, r)| *m <= r.worst_ratio * profile.m_inf_estimate);
    report(
        9,
        "m_eps trend",
        outcome(
            nonincreasing && last_gap <= 0.1 && upper_ok && ground.iter().all(|(_, s)| s.is_converged()),
            format!(
                "m_eps = {:.6} / {:.6} / {:.6} at eps 0.2 / 0.1 / 0.05, m_inf {:.6}, gap {last_gap:.1e}",
                m_eps[0], m_eps[1], m_eps[2], profile.m_inf_estimate
            ),
        ),
    );

    report(10, "determinism and I/O", determinism());

    results.sort_by_key(|r| r.0);
    for (n, name, o) in &results {
        println!(
            "criterion {n:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} passed in {:.0} s",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let body = "mode = ground\nseed = 11\ntorus.L = 1\ntorus.N = 20\nmodel.eps = 0.25\nmodel.p = 4.25\nmodel.q = 0.25\nsolver.tol = 1e-7\n";
    let run = |name: &str| {
        let dir = tmp.path().join(name);
        let cfg = validate_config(&format!("{body}output.dir = {}\n", dir.display())).unwrap();
        let rep = run_experiment(&cfg).unwrap();
        let mut files: Vec<(String, Vec<u8>)> = rep
            .referenced_paths()
            .into_iter()
            .chain([rep.report_path()])
            .map(|p| {
                (
                    p.strip_prefix(&dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };
    let a = run("a");
    let b = run("b");
    let identical = a
        .iter()
        .zip(&b)
        .all(|(x, y)| x.0 == y.0 && (x.0 == "report.txt" || x.0 == "timing.csv" || x.1 == y.1));
    let report_same = {
        let strip = |f: &[(String, Vec<u8>)]| {
            let text = String::from_utf8(f.iter().find(|x| x.0 == "report.txt").unwrap().1.clone()).unwrap();
            text.lines()
                .filter(|l| !l.starts_with("config.output.dir"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        strip(&a) == strip(&b)
    };

    let spec = TorusSpec::new([1.0, 1.7, 0.6], [12, 16, 8]).unwrap();
    let mut roundtrip = true;
    for seed in 0..5 {
        let u = band_limited(spec, seed, 7, 4, 0.1);
        let mut buf = vec![];
        write_field(&mut buf, &u).unwrap();
        let back = read_field(&mut buf.as_slice()).unwrap();
        roundtrip &= back.spec() == u.spec()
            && back
                .values()
                .iter()
                .zip(u.values())
                .all(|(x, y)| x.to_bits() == y.to_bits());
    }
    outcome(
        a.len() == b.len() && identical && report_same && roundtrip,
        format!(
            "{} artifacts compared, reports identical {report_same}, field dumps roundtrip bit-exact {roundtrip}",
            a.len()
        ),
    )
}
